"""
Caching module for MeadowCalc.
Persists results of exhaustive searches with diskcache so that replaying a
script does not redo a search whose inputs have not changed.
"""

import os
import time
import logging
from typing import Any, Iterable, Optional

import diskcache as dc

from meadowcalc.settings import Settings, load_settings

logger = logging.getLogger(__name__)

_SIZE_LIMIT = 100 * 1024 * 1024  # 100MB

_cache: Optional[dc.Cache] = None
_cache_dir: Optional[str] = None


def _get_cache(settings: Optional[Settings] = None) -> Optional[dc.Cache]:
    """
    Open the cache directory named by settings, reopening it when the
    directory changes; None when caching is off or the directory cannot be opened.
    """
    global _cache, _cache_dir
    settings = settings or load_settings()
    if not settings.cache_enabled:
        return None
    if _cache is not None and _cache_dir == settings.cache_dir:
        return _cache
    if _cache is not None:
        _cache.close()
    try:
        os.makedirs(settings.cache_dir, exist_ok=True)
        _cache = dc.Cache(settings.cache_dir, size_limit=_SIZE_LIMIT)
        _cache_dir = settings.cache_dir
        logger.debug(f"Opened cache at {settings.cache_dir}")
    except Exception as e:
        logger.warning(f"Cache unavailable at {settings.cache_dir}: {e}")
        _cache = None
        _cache_dir = None
    return _cache


def search_key(kind: str, *parts: Iterable[Any]) -> str:
    """
    Build a deterministic cache key from search parameters.

    Args:
        kind: Search kind, e.g. "counterexample"
        parts: Parameters; each is rendered with str()

    Returns:
        str: Key such as "counterexample|2|PF,WPF|0,1"
    """
    return "|".join([kind] + [str(p) for p in parts])


def cache_data(key: str, data: Any, ttl: Optional[int] = None, settings: Optional[Settings] = None) -> bool:
    """
    Cache data with a time-to-live (TTL) in seconds.

    Args:
        key: Cache key
        data: Data to cache (must be picklable)
        ttl: Time to live in seconds (default: MEADOW_CACHE_TTL)
        settings: Settings to use instead of the environment

    Returns:
        bool: True if successfully cached, False otherwise
    """
    settings = settings or load_settings()
    cache = _get_cache(settings)
    if cache is None:
        return False
    if ttl is None:
        ttl = settings.cache_ttl
    try:
        cache[key] = {'data': data, 'timestamp': time.time(), 'ttl': ttl}
        logger.debug(f"Cached data with key: {key}, TTL: {ttl}s")
        return True
    except Exception as e:
        logger.error(f"Error caching data with key {key}: {e}")
        return False


def get_cached_data(key: str, settings: Optional[Settings] = None) -> Optional[Any]:
    """
    Retrieve cached data if it exists and hasn't expired.

    Args:
        key: Cache key

    Returns:
        Cached data if valid, None if not found or expired
    """
    cache = _get_cache(settings)
    if cache is None:
        return None
    try:
        if key not in cache:
            logger.debug(f"Cache miss for key: {key}")
            return None

        entry = cache[key]
        if time.time() - entry['timestamp'] > entry['ttl']:
            logger.debug(f"Cache expired for key: {key}")
            del cache[key]
            return None

        logger.debug(f"Cache hit for key: {key}")
        return entry['data']

    except Exception as e:
        logger.error(f"Error retrieving cached data for key {key}: {e}")
        return None


def invalidate_cache(key: str, settings: Optional[Settings] = None) -> bool:
    """
    Remove a specific cache entry.

    Returns:
        bool: True if removed, False if not found or the cache is off
    """
    cache = _get_cache(settings)
    if cache is None:
        return False
    try:
        if key in cache:
            del cache[key]
            logger.debug(f"Invalidated cache for key: {key}")
            return True
        return False
    except Exception as e:
        logger.error(f"Error invalidating cache for key {key}: {e}")
        return False


def clear_cache(settings: Optional[Settings] = None) -> bool:
    """Clear all cache entries."""
    cache = _get_cache(settings)
    if cache is None:
        return False
    try:
        cache.clear()
        logger.info("Cleared all cache entries")
        return True
    except Exception as e:
        logger.error(f"Error clearing cache: {e}")
        return False


def get_cache_stats(settings: Optional[Settings] = None) -> dict:
    """
    Get cache statistics.

    Returns:
        dict: entry count, volume and directory, or {'enabled': False}
    """
    cache = _get_cache(settings)
    if cache is None:
        return {'enabled': False}
    try:
        return {
            'enabled': True,
            'total_entries': len(cache),
            'cache_size_bytes': cache.volume(),
            'cache_directory': cache.directory,
            'size_limit_bytes': cache.size_limit,
        }
    except Exception as e:
        logger.error(f"Error getting cache stats: {e}")
        return {'enabled': True, 'error': str(e)}
