"""Freezes an independent reference parse of conformance.nt.

Each line is parsed on its own with rdflib's N-Triples parser. Accepted
lines become one JSON object per triple; rejected lines are listed by line
number. Rerun after editing conformance.nt:  python3 make_reference.py
"""
import json
import os
import re

from rdflib import Graph, Literal, URIRef

HERE = os.path.dirname(os.path.abspath(__file__))

# rdflib keeps unknown escapes such as \q or a short \u12 verbatim. The
# N-Triples grammar only allows ECHAR (\t \b \n \r \f \" \' \\) and
# complete UCHARs, so such lines are treated as rejected here.
VALID_ESCAPE = re.compile(r'\\(?:[tbnrf"\'\\]|u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8})')


def bad_escape(line):
    rest = VALID_ESCAPE.sub("", line)
    return "\\" in rest


def term(t):
    if isinstance(t, URIRef):
        return {"iri": str(t)}
    assert isinstance(t, Literal)
    out = {"lexical": str(t)}
    if t.language:
        out["lang"] = t.language
    if t.datatype:
        out["datatype"] = str(t.datatype)
    return out


triples, rejected = [], []
with open(os.path.join(HERE, "conformance.nt"), encoding="utf-8") as f:
    for n, line in enumerate(f, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if bad_escape(line):
            rejected.append(n)
            continue
        g = Graph()
        try:
            g.parse(data=line, format="nt")
        except Exception:
            rejected.append(n)
            continue
        if len(g) != 1:
            rejected.append(n)
            continue
        s, p, o = next(iter(g))
        triples.append({"line": n, "subject": str(s), "predicate": str(p), "object": term(o)})

with open(os.path.join(HERE, "conformance.reference.json"), "w", encoding="utf-8") as f:
    json.dump({"triples": triples, "rejected_lines": rejected}, f, ensure_ascii=False, indent=1)
    f.write("\n")
print(len(triples), "triples;", "rejected lines", rejected)
