# ABOUTME: Services layer for infrastructure concerns.
# ABOUTME: Provides the in-memory LRU cache used to memoize optimizer results.

from src.services.cache import (
    LruCache,
    OptimizerResultCache,
    get_optimizer_cache,
    reset_optimizer_cache,
)

__all__ = [
    "LruCache",
    "OptimizerResultCache",
    "get_optimizer_cache",
    "reset_optimizer_cache",
]
