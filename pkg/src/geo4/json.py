import json
import re
from fractions import Fraction
from typing import Any, List, Optional


class OneLine:
    """Wrap any value in this class to print it on one line in the JSON file"""

    def __init__(self, value):
        self.value = value


_PLACEHOLDER = re.compile(r'"\\u0000(\d+)\\u0000"')


def _plain(obj, one_lines: Optional[List[str]]) -> Any:
    # one_lines is None inside a OneLine value
    if isinstance(obj, OneLine):
        if one_lines is None:
            return _plain(obj.value, None)
        one_lines.append(json.dumps(_plain(obj.value, None), ensure_ascii=False))
        return f"\x00{len(one_lines) - 1}\x00"
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (tuple, list)):
        return [_plain(v, one_lines) for v in obj]
    if isinstance(obj, dict):
        return {k: _plain(v, one_lines) for k, v in obj.items()}
    if obj is None or isinstance(obj, (str, int, float)):
        return obj
    raise ValueError(f"cannot serialize type {obj.__class__.__name__}")


def dumps(obj, indent: int = 2) -> str:
    """
    Encode an object hierarchy as JSON string. Lists and dicts wrapped in
    OneLine are written without line breaks. Fractions are written as "p/q"
    strings and tuples as lists.

    >>> print(dumps({"point": OneLine([7, 8]), "slope": Fraction(48, 5), "ok": True}))
    {
      "point": [7, 8],
      "slope": "48/5",
      "ok": true
    }
    >>> print(dumps({"a": [], "b": OneLine({"c": (1, Fraction(1, 2))})}))
    {
      "a": [],
      "b": {"c": [1, "1/2"]}
    }
    """
    one_lines: List[str] = []
    text = json.dumps(_plain(obj, one_lines), indent=indent, ensure_ascii=False)
    return _PLACEHOLDER.sub(lambda m: one_lines[int(m.group(1))], text)
