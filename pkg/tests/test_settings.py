import os
import unittest
from unittest import mock

from meadowcalc.settings import DEFAULT_CACHE_DIR, Settings, load_settings

MEADOW_VARS = ("MEADOW_MAX_ATOMS", "MEADOW_SEED", "MEADOW_JOINT_MAX_CELLS", "MEADOW_CACHE_DIR",
               "MEADOW_CACHE_ENABLED", "MEADOW_CACHE_TTL", "LOG_LEVEL")


def clean_environ(**values):
    env = {k: v for k, v in os.environ.items() if k not in MEADOW_VARS}
    env.update(values)
    return mock.patch.dict(os.environ, env, clear=True)


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        with clean_environ():
            settings = load_settings()
        self.assertEqual(settings, Settings())
        self.assertEqual(settings.cache_dir, DEFAULT_CACHE_DIR)

    def test_environment_values(self):
        with clean_environ(MEADOW_MAX_ATOMS="2", MEADOW_SEED="7", MEADOW_CACHE_ENABLED="no", LOG_LEVEL="debug"):
            settings = load_settings()
        self.assertEqual(settings.max_atoms, 2)
        self.assertEqual(settings.seed, 7)
        self.assertFalse(settings.cache_enabled)
        self.assertEqual(settings.log_level, "DEBUG")

    def test_bad_integer_falls_back(self):
        with clean_environ(MEADOW_JOINT_MAX_CELLS="many"):
            with self.assertLogs("meadowcalc.settings", level="WARNING"):
                settings = load_settings()
        self.assertEqual(settings.joint_max_cells, 64)


if __name__ == "__main__":
    unittest.main()
