#!/usr/bin/env python3
"""Regenerate src/unicode_tables.inc from the Python unicodedata database.

The tables drive answer normalization: punctuation stripping (general
category P*), simple lowercasing, and whitespace detection. Output is a
C++ fragment with sorted arrays searched by std::lower_bound.
"""
import sys
import unicodedata


def ranges(pred, limit=0x110000):
    out = []
    start = None
    for cp in range(limit):
        if pred(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, limit - 1))
    return out


def is_punct(cp):
    return unicodedata.category(chr(cp)).startswith("P")


def is_space(cp):
    return chr(cp).isspace()


def lower_pairs():
    out = []
    for cp in range(0x110000):
        c = chr(cp)
        low = c.lower()
        if low != c and len(low) == 1:
            out.append((cp, ord(low)))
    return out


def emit(out):
    punct = ranges(is_punct)
    space = ranges(is_space)
    lower = lower_pairs()
    out.write("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
              % unicodedata.unidata_version)
    out.write("struct CpRange { char32_t lo; char32_t hi; };\n")
    out.write("struct CpMap { char32_t from; char32_t to; };\n")
    out.write("static const CpRange kPunctRanges[] = {\n")
    for lo, hi in punct:
        out.write("  {0x%X, 0x%X},\n" % (lo, hi))
    out.write("};\n")
    out.write("static const CpRange kSpaceRanges[] = {\n")
    for lo, hi in space:
        out.write("  {0x%X, 0x%X},\n" % (lo, hi))
    out.write("};\n")
    out.write("static const CpMap kLowerMap[] = {\n")
    for cp, low in lower:
        out.write("  {0x%X, 0x%X},\n" % (cp, low))
    out.write("};\n")


if __name__ == "__main__":
    emit(sys.stdout)
