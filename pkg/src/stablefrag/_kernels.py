"""Compiled inner loops.  Everything here takes and returns flat int/float
arrays; validation happens in the calling modules."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def decode_parents(children):
    """Parent array of the plane tree whose depth-first child counts are given.

    Assumes the counts form a valid Lukasiewicz excursion.
    """
    n = children.shape[0]
    parent = np.empty(n, np.int64)
    stack = np.empty(n, np.int64)
    slots = np.empty(n, np.int64)
    top = -1
    parent[0] = -1
    for v in range(n):
        if v > 0:
            parent[v] = stack[top]
            slots[top] -= 1
            if slots[top] == 0:
                top -= 1
        if children[v] > 0:
            top += 1
            stack[top] = v
            slots[top] = children[v]
    return parent


@njit(cache=True, nogil=True)
def prim_order(offsets, kids, weights):
    """Prim exploration of a rooted tree from vertex 0.

    The frontier only ever holds parent-to-child edges, each keyed by the
    child's edge weight, so a binary heap over child vertices suffices.
    """
    n = offsets.shape[0] - 1
    order = np.empty(n, np.int64)
    heap_w = np.empty(n, np.float64)
    heap_v = np.empty(n, np.int64)
    size = 0
    v = 0
    for i in range(n):
        if i > 0:
            # pop minimum
            v = heap_v[0]
            size -= 1
            w_last = heap_w[size]
            v_last = heap_v[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                if child + 1 < size and heap_w[child + 1] < heap_w[child]:
                    child += 1
                if heap_w[child] < w_last:
                    heap_w[pos] = heap_w[child]
                    heap_v[pos] = heap_v[child]
                    pos = child
                else:
                    break
            heap_w[pos] = w_last
            heap_v[pos] = v_last
        order[i] = v
        for j in range(offsets[v], offsets[v + 1]):
            u = kids[j]
            w = weights[u]
            pos = size
            size += 1
            while pos > 0:
                up = (pos - 1) // 2
                if heap_w[up] > w:
                    heap_w[pos] = heap_w[up]
                    heap_v[pos] = heap_v[up]
                    pos = up
                else:
                    break
            heap_w[pos] = w
            heap_v[pos] = u
    return order


@njit(cache=True, nogil=True)
def subtree_component_sizes(parent, kept):
    """Sizes of the components left after deleting edges with ``kept == False``.

    Relies on parent[v] < v (depth-first labelling); returns sizes in
    decreasing order of component root.
    """
    n = parent.shape[0]
    size = np.ones(n, np.int64)
    out = np.empty(n, np.int64)
    count = 0
    for v in range(n - 1, 0, -1):
        if kept[v]:
            size[parent[v]] += size[v]
        else:
            out[count] = size[v]
            count += 1
    out[count] = size[0]
    return out[: count + 1]
