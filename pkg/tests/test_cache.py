import os
import shutil
import tempfile
import time
import unittest
from unittest import mock

from meadowcalc import cache
from meadowcalc.session import Session
from meadowcalc.settings import Settings


class TestCache(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        patcher = mock.patch.dict(os.environ, {"MEADOW_CACHE_DIR": self.directory, "MEADOW_CACHE_ENABLED": "1"})
        patcher.start()
        self.addCleanup(patcher.stop)
        cache._cache = None

    def tearDown(self):
        if cache._cache is not None:
            cache._cache.close()
        cache._cache = None
        shutil.rmtree(self.directory, ignore_errors=True)

    def test_search_key(self):
        self.assertEqual(cache.search_key("counterexample", 2, "PF,WPF", "0,1"), "counterexample|2|PF,WPF|0,1")

    def test_store_and_fetch(self):
        self.assertTrue(cache.cache_data("k", {"values": [0, 1]}))
        self.assertEqual(cache.get_cached_data("k"), {"values": [0, 1]})
        self.assertIsNone(cache.get_cached_data("missing"))

    def test_expired_entry_is_dropped(self):
        cache.cache_data("k", 1, ttl=10)
        with mock.patch("meadowcalc.cache.time.time", return_value=time.time() + 60):
            self.assertIsNone(cache.get_cached_data("k"))
        self.assertFalse(cache.invalidate_cache("k"))

    def test_invalidate_and_clear(self):
        cache.cache_data("a", 1)
        cache.cache_data("b", 2)
        self.assertTrue(cache.invalidate_cache("a"))
        self.assertEqual(cache.get_cache_stats()["total_entries"], 1)
        self.assertTrue(cache.clear_cache())
        self.assertEqual(cache.get_cache_stats()["total_entries"], 0)

    def test_disabled(self):
        with mock.patch.dict(os.environ, {"MEADOW_CACHE_ENABLED": "false"}):
            self.assertFalse(cache.cache_data("k", 1))
            self.assertIsNone(cache.get_cached_data("k"))
            self.assertEqual(cache.get_cache_stats(), {"enabled": False})

    def other_settings(self):
        directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, directory, True)
        return Settings(cache_dir=directory)

    def test_explicit_settings_choose_the_directory(self):
        settings = self.other_settings()
        self.assertTrue(cache.cache_data("k", 1, settings=settings))
        self.assertEqual(cache.get_cache_stats(settings)["cache_directory"], settings.cache_dir)
        self.assertIsNone(cache.get_cached_data("k"))
        self.assertEqual(cache.get_cache_stats()["cache_directory"], self.directory)
        self.assertEqual(cache.get_cached_data("k", settings=settings), 1)

    def test_session_settings_reach_the_cache(self):
        settings = self.other_settings()
        with mock.patch.dict(os.environ, {"MEADOW_CACHE_ENABLED": "0"}):
            Session(settings).run_line("search satisfy WPF violate PF atoms 2 grid 0,1")
        self.assertEqual(cache.get_cache_stats(settings)["total_entries"], 1)


if __name__ == "__main__":
    unittest.main()
