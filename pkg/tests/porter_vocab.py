"""Deterministic large vocabulary for stemmer verification.

Words are harvested from Python standard-library sources available on any
test machine, then multiplied with a fixed set of suffixes so every rule
family in the stemmer gets exercised.  Yields well over 100k distinct
words (the reference check needs at least ~23k).
"""

from __future__ import annotations

import importlib
import inspect
import re

_MODULES = [
    "abc", "argparse", "ast", "asyncio", "base64", "bisect", "calendar",
    "cmd", "code", "codecs", "collections", "colorsys", "configparser",
    "contextlib", "copy", "csv", "ctypes", "dataclasses", "datetime",
    "decimal", "difflib", "dis", "doctest", "email", "enum", "filecmp",
    "fileinput", "fnmatch", "fractions", "ftplib", "functools", "getpass",
    "gettext", "glob", "gzip", "hashlib", "heapq", "hmac", "html.parser",
    "http.client", "imaplib", "inspect", "io", "ipaddress", "json",
    "keyword", "linecache", "locale", "logging", "mailbox", "mimetypes",
    "multiprocessing", "netrc", "ntpath", "numbers", "operator", "optparse",
    "os", "pathlib", "pdb", "pickle", "pkgutil", "platform", "plistlib",
    "poplib", "posixpath", "pprint", "profile", "pstats", "pydoc", "queue",
    "quopri", "random", "re", "reprlib", "sched", "secrets", "selectors",
    "shlex", "shutil", "smtplib", "socket", "sqlite3", "ssl", "statistics",
    "string", "subprocess", "sysconfig", "tarfile", "tempfile", "textwrap",
    "threading", "timeit", "token", "tokenize", "trace", "traceback",
    "turtle", "types", "typing", "unittest", "urllib.request", "uuid",
    "venv", "warnings", "wave", "weakref", "webbrowser", "xml.dom.minidom",
    "zipfile", "zoneinfo",
]

_SUFFIXES = [
    "s", "es", "ed", "ing", "ly", "er", "est", "ness", "ful", "fulness",
    "ation", "ization", "ational", "tional", "iveness", "ousness", "alism",
    "aliti", "iviti", "biliti", "alli", "entli", "eli", "ousli", "ement",
    "ment", "ent", "ism", "ate", "iti", "ous", "ive", "ize", "icate",
    "ative", "alize", "iciti", "ical", "ance", "ence", "able", "ible",
    "ant", "ion", "al", "y", "ies", "eed", "sses", "e", "ee", "ll",
]


def harvest_words() -> list[str]:
    words: set[str] = set()
    for name in _MODULES:
        try:
            src = inspect.getsource(importlib.import_module(name))
        except Exception:
            continue
        words.update(w.lower() for w in re.findall(r"[A-Za-z]+", src))
    for base in sorted(words)[:4000]:
        for suf in _SUFFIXES:
            words.add(base + suf)
    return sorted(words)
