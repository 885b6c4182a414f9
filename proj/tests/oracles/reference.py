"""Reference values frozen into the C++ tests.

Run from the repository root: python3 tests/oracles/reference.py
Uses only the standard library (html.parser, hashlib).
"""
import hashlib
from html.parser import HTMLParser

VOID = {"area", "base", "br", "col", "embed", "hr", "img", "input", "link",
        "meta", "param", "source", "track", "wbr"}


class Layers(HTMLParser):
    def __init__(self):
        super().__init__()
        self.root = None
        self.stack = []

    def handle_starttag(self, tag, attrs):
        node = (tag, [])
        if self.root is None:
            self.root = node
        else:
            self.stack[-1][1].append(node)
        if tag not in VOID:
            self.stack.append(node)

    def handle_endtag(self, tag):
        for i in range(len(self.stack) - 1, -1, -1):
            if self.stack[i][0] == tag:
                del self.stack[i:]
                break


def layer_sizes(path):
    p = Layers()
    with open(path, encoding="utf-8") as f:
        p.feed(f.read())
    sizes, layer = [], [p.root]
    while layer:
        sizes.append(len(layer))
        layer = [c for n in layer for c in n[1]]
    return sizes


if __name__ == "__main__":
    print("login_paypal.html layers:", layer_sizes("tests/data/login_paypal.html"))
    for s in ["PageTerm=login", "PageHasForms", "UrlTld=com", "PageLinkDomain=paypal.com",
              "PageTerm=Hello", "PageTerm=verify"]:
        print(s, hashlib.sha256(s.encode("utf-8")).hexdigest())
