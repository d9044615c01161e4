"""Addressable min-priority queue with decrease-key.

Pairing heap: amortized O(1) decrease-key in practice, O(log n) extract-min.
The asymptotic contract callers rely on is the Fibonacci-heap one; the
structure is swappable behind this interface.  Ties are broken by smaller id
everywhere so extraction orders are deterministic.  Key comparisons route
through a CostMeter when one is supplied.
"""

from __future__ import annotations

from .metering import NULL_METER


class DuplicateKey(ValueError):
    pass


class NotFound(KeyError):
    pass


class KeyIncrease(ValueError):
    pass


class Empty(IndexError):
    pass


class _Node:
    __slots__ = ("item", "key", "child", "sibling", "prev")

    def __init__(self, item, key):
        self.item = item
        self.key = key
        self.child = None    # leftmost child
        self.sibling = None  # next sibling to the right
        self.prev = None     # left sibling, or parent if leftmost


class AddressablePQ:
    """Min-heap over (key, id) with O(1) membership and decrease-key."""

    __slots__ = ("_root", "_nodes", "_meter")

    def __init__(self, meter=None):
        self._root = None
        self._nodes = {}
        self._meter = meter if meter is not None else NULL_METER

    def __len__(self):
        return len(self._nodes)

    def __bool__(self):
        return self._root is not None

    def __contains__(self, item):
        return item in self._nodes

    def key_of(self, item):
        try:
            return self._nodes[item].key
        except KeyError:
            raise NotFound(item) from None

    def _wins(self, a: _Node, b: _Node) -> bool:
        c = self._meter.cmp(a.key, b.key)
        if c != 0:
            return c < 0
        return a.item < b.item

    def _meld(self, a: _Node, b: _Node) -> _Node:
        if self._wins(b, a):
            a, b = b, a
        # b becomes the leftmost child of a
        b.prev = a
        b.sibling = a.child
        if a.child is not None:
            a.child.prev = b
        a.child = b
        return a

    def insert(self, item, key) -> None:
        if item in self._nodes:
            raise DuplicateKey(item)
        node = _Node(item, key)
        self._nodes[item] = node
        self._root = node if self._root is None else self._meld(self._root, node)

    def decrease_key(self, item, key) -> None:
        try:
            node = self._nodes[item]
        except KeyError:
            raise NotFound(item) from None
        c = self._meter.cmp(key, node.key)
        if c > 0:
            raise KeyIncrease(f"{key} > {node.key}")
        if c == 0:
            return
        node.key = key
        if node is self._root:
            return
        # cut the subtree rooted at node, then meld it with the root
        prev, sib = node.prev, node.sibling
        if prev.child is node:
            prev.child = sib
        else:
            prev.sibling = sib
        if sib is not None:
            sib.prev = prev
        node.prev = None
        node.sibling = None
        self._root = self._meld(self._root, node)

    def extract_min(self):
        root = self._root
        if root is None:
            raise Empty("extract_min from empty queue")
        del self._nodes[root.item]
        # two-pass pairing of the root's children:
        # meld adjacent pairs left to right, then fold right to left
        pairs = []
        a = root.child
        while a is not None:
            b = a.sibling
            a.prev = None
            a.sibling = None
            if b is None:
                pairs.append(a)
                break
            nxt = b.sibling
            b.prev = None
            b.sibling = None
            pairs.append(self._meld(a, b))
            a = nxt
        new_root = None
        for h in reversed(pairs):
            new_root = h if new_root is None else self._meld(h, new_root)
        self._root = new_root
        return root.item, root.key
