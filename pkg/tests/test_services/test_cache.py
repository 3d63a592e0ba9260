# ABOUTME: Tests for the in-memory LRU cache and the optimizer result cache.
# ABOUTME: Validates eviction order, key derivation, hit statistics and the singleton reset.

import threading

from src.services.cache import (
    LruCache,
    OptimizerResultCache,
    get_optimizer_cache,
    reset_optimizer_cache,
)
from src.sources.params import MdlParams


class TestLruCache:
    """Tests for the LRU backend."""

    def test_get_set_basic(self):
        """Basic get/set should work."""
        cache = LruCache()
        cache.set("key1", {"data": 123})
        assert cache.get("key1") == {"data": 123}

    def test_get_missing_key_returns_none(self):
        """Missing key should return None."""
        assert LruCache().get("nonexistent") is None

    def test_lru_eviction(self):
        """Oldest entry should be evicted when over capacity."""
        cache = LruCache(max_size=2)
        cache.set("key1", "v1")
        cache.set("key2", "v2")
        cache.set("key3", "v3")

        assert cache.get("key1") is None
        assert cache.get("key2") == "v2"
        assert cache.get("key3") == "v3"

    def test_lru_access_updates_order(self):
        """Accessing an entry should protect it from eviction."""
        cache = LruCache(max_size=2)
        cache.set("key1", "v1")
        cache.set("key2", "v2")
        cache.get("key1")
        cache.set("key3", "v3")

        assert cache.get("key1") == "v1"
        assert cache.get("key2") is None

    def test_clear(self):
        """Clear removes every entry."""
        cache = LruCache()
        cache.set("key1", "v1")
        cache.set("key2", "v2")
        assert cache.size() == 2
        cache.clear()
        assert cache.size() == 0

    def test_concurrent_sets(self):
        """Concurrent writers never exceed the capacity."""
        cache = LruCache(max_size=50)

        def writer(offset: int) -> None:
            for i in range(200):
                cache.set(f"{offset}-{i}", i)

        threads = [threading.Thread(target=writer, args=(t,)) for t in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert cache.size() == 50


class TestOptimizerResultCache:
    """Tests for the optimizer-result wrapper."""

    def test_roundtrip_and_stats(self):
        """A stored result is returned and counted as a hit."""
        cache = OptimizerResultCache()
        params = MdlParams.uniform()
        settings = {"restarts": 4, "seed": 1}

        assert cache.get(params, settings) is None
        cache.set(params, settings, "result")
        assert cache.get(params, settings) == "result"

        stats = cache.stats
        assert stats["hits"] == 1
        assert stats["misses"] == 1
        assert stats["hit_rate"] == 0.5

    def test_key_depends_on_box_and_settings(self):
        """Different boxes or settings do not share entries."""
        cache = OptimizerResultCache()
        a = MdlParams.uniform()
        b = MdlParams(mu_min=0.2, mu_max=0.3)

        assert cache._make_key(a, {"seed": 1}) != cache._make_key(b, {"seed": 1})
        assert cache._make_key(a, {"seed": 1}) != cache._make_key(a, {"seed": 2})
        assert cache._make_key(a, {"seed": 1}) == cache._make_key(a, {"seed": 1})
        assert cache._make_key(a, {"seed": 1}).startswith("opt:")

    def test_clear_resets_stats(self):
        """Clearing drops entries and statistics."""
        cache = OptimizerResultCache()
        cache.set(MdlParams.uniform(), {}, "result")
        cache.get(MdlParams.uniform(), {})
        cache.clear()
        assert cache.stats["total"] == 0
        assert cache.get(MdlParams.uniform(), {}) is None


class TestOptimizerCacheSingleton:
    """Tests for the process-wide cache."""

    def setup_method(self):
        reset_optimizer_cache()

    def teardown_method(self):
        reset_optimizer_cache()

    def test_singleton_is_shared(self):
        """Repeated calls return the same instance."""
        assert get_optimizer_cache() is get_optimizer_cache()

    def test_reset_creates_new_instance(self):
        """Reset drops the singleton."""
        first = get_optimizer_cache()
        reset_optimizer_cache()
        assert get_optimizer_cache() is not first
