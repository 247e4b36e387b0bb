import functools
import threading
from collections import OrderedDict
from typing import Any, Callable, Hashable

from app.core.config import settings
from app.utils.logger import get_logger


logger = get_logger("cache")

_MISSING = object()


class Cache:
    """In-process LRU memo shared by the prover; safe for concurrent routine checks."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._entries = OrderedDict()
            cls._instance._lock = threading.Lock()
            cls._instance._capacity = settings.prover.cache_size
            cls._instance.hits = 0
            cls._instance.misses = 0
        return cls._instance

    def get(self, key: Hashable, default: Any = None) -> Any:
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                self.hits += 1
                return self._entries[key]
            self.misses += 1
            return default

    def set(self, key: Hashable, value: Any) -> None:
        if self._capacity <= 0:
            return
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self._capacity:
                self._entries.popitem(last=False)

    def invalidate(self, key_prefix: str | None = None) -> None:
        """Drop every entry, or those whose key tuple starts with key_prefix."""
        with self._lock:
            if key_prefix is None:
                count = len(self._entries)
                self._entries.clear()
            else:
                stale = [k for k in self._entries if isinstance(k, tuple) and k and k[0] == key_prefix]
                for k in stale:
                    del self._entries[k]
                count = len(stale)
            self.hits = 0
            self.misses = 0
        logger.debug(f"Invalidated {count} cache entries")

    def __len__(self) -> int:
        return len(self._entries)

    def cacheable(self, key_builder: Callable[..., Hashable], enabled: Callable[[], bool] = lambda: True):
        """Decorator memoizing a pure function under key_builder(*args, **kwargs)."""

        def decorator(fn):
            @functools.wraps(fn)
            def wrapper(*args, **kwargs):
                if not enabled():
                    return fn(*args, **kwargs)
                key = key_builder(*args, **kwargs)
                cached = self.get(key, _MISSING)
                if cached is not _MISSING:
                    logger.debug(f"Cache hit for {fn.__name__}")
                    return cached
                result = fn(*args, **kwargs)
                self.set(key, result)
                return result

            return wrapper

        return decorator


cache = Cache()
