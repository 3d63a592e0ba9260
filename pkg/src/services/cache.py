# ABOUTME: In-memory LRU caching for expensive, deterministic computations.
# ABOUTME: Memoizes Bell-operator optimizer results keyed by MDL box and optimizer settings.

import hashlib
import json
import logging
import threading
from collections import OrderedDict
from typing import Any

from src.config import config

logger = logging.getLogger(__name__)


class LruCache:
    """Thread-safe in-memory LRU cache."""

    def __init__(self, max_size: int = 1000):
        self._cache: OrderedDict[str, Any] = OrderedDict()
        self._max_size = max_size
        self._lock = threading.Lock()

    def get(self, key: str) -> Any | None:
        with self._lock:
            if key not in self._cache:
                return None
            # Move to end (LRU)
            self._cache.move_to_end(key)
            return self._cache[key]

    def set(self, key: str, value: Any) -> None:
        with self._lock:
            self._cache[key] = value
            self._cache.move_to_end(key)
            # Evict oldest if over capacity
            while len(self._cache) > self._max_size:
                self._cache.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()

    def size(self) -> int:
        """Return current cache size."""
        return len(self._cache)


class OptimizerResultCache:
    """High-level cache for optimizer results."""

    def __init__(self, backend: LruCache | None = None):
        self._backend = backend or LruCache(max_size=config.CACHE_MAX_SIZE)
        self._hits = 0
        self._misses = 0

    def _make_key(self, params: Any, settings: dict[str, Any]) -> str:
        """Generate cache key from the mu box and optimizer settings."""
        payload = {
            "mu_min": params.mu_min,
            "mu_max": params.mu_max,
            "settings": settings,
        }
        param_str = json.dumps(payload, sort_keys=True)
        hash_val = hashlib.sha256(param_str.encode()).hexdigest()[:16]
        return f"opt:{hash_val}"

    def get(self, params: Any, settings: dict[str, Any]) -> Any | None:
        """Get a cached result."""
        key = self._make_key(params, settings)
        result = self._backend.get(key)
        if result is not None:
            self._hits += 1
        else:
            self._misses += 1
        return result

    def set(self, params: Any, settings: dict[str, Any], result: Any) -> None:
        """Cache a result."""
        key = self._make_key(params, settings)
        self._backend.set(key, result)

    def clear(self) -> None:
        """Clear all cached results."""
        self._backend.clear()
        self._hits = 0
        self._misses = 0

    @property
    def stats(self) -> dict[str, float]:
        """Return cache statistics."""
        total = self._hits + self._misses
        return {
            "hits": self._hits,
            "misses": self._misses,
            "total": total,
            "hit_rate": self._hits / total if total > 0 else 0.0,
        }


_optimizer_cache: OptimizerResultCache | None = None


def get_optimizer_cache() -> OptimizerResultCache:
    """Get or create the process-wide optimizer cache."""
    global _optimizer_cache
    if _optimizer_cache is None:
        _optimizer_cache = OptimizerResultCache()
        logger.debug(f"Created optimizer cache (max size {config.CACHE_MAX_SIZE})")
    return _optimizer_cache


def reset_optimizer_cache() -> None:
    """Reset the optimizer cache (for testing)."""
    global _optimizer_cache
    if _optimizer_cache:
        _optimizer_cache.clear()
    _optimizer_cache = None
