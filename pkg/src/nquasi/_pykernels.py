"""Pure-Python/numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` exactly, including exploration order, so
either backend returns identical results.
"""

import numpy as np


def latin_violation(values, order, arity):
    """Return ``(position, cell, symbol)`` for the first repeated symbol or None.

    Lines are scanned position by position, each position's lines in
    lexicographic order of the remaining coordinates, each line in ascending
    order of its own coordinate. ``cell`` is the flat index of the second
    occurrence of ``symbol``.
    """
    if arity == 0:
        return None
    cube = np.asarray(values).reshape((order,) * arity)
    flat_index = np.arange(order ** arity).reshape((order,) * arity)
    target = np.arange(order)
    for p in range(arity):
        lines = np.moveaxis(cube, p, -1).reshape(-1, order)
        ok = (np.sort(lines, axis=1) == target).all(axis=1)
        if ok.all():
            continue
        row = int(np.argmin(ok))
        cells = np.moveaxis(flat_index, p, -1).reshape(-1, order)[row]
        seen = set()
        for c, v in zip(cells, lines[row]):
            if int(v) in seen:
                return p, int(c), int(v)
            seen.add(int(v))
    return None


def isotopy_search(words, solvers, order):
    """Backtracking search for coordinatewise permutations between two predicates.

    ``words`` are the member tuples of the source predicate, shape (L, N).
    ``solvers[j]`` is the target predicate solved for coordinate j, indexed by
    the lexicographic code of the other N-1 coordinates. Returns an (N, order)
    array of images, or None when no witness exists.

    Branching takes the first unmapped (coordinate, symbol) pair, coordinates
    left to right and symbols ascending, and tries images in ascending order.
    Every assignment is propagated: a member tuple with exactly one unmapped
    coordinate forces that image, a fully mapped tuple must land in the target.
    """
    words = np.asarray(words, dtype=np.int64)
    solvers = np.asarray(solvers, dtype=np.int64)
    n_words, n = words.shape
    s = order
    rows = words.tolist()
    solve = solvers.tolist()
    weights = [[s ** (n - 2 - t) if t < j else s ** (n - 1 - t) for t in range(n)] for j in range(n)]
    for j in range(n):
        weights[j][j] = 0
    occ = [[[] for _ in range(s)] for _ in range(n)]
    for w, row in enumerate(rows):
        for i in range(n):
            occ[i][row[i]].append(w)
    img = [[-1] * s for _ in range(n)]
    used = [[False] * s for _ in range(n)]
    trail = []

    def assign(i, a, b, queue):
        cur = img[i][a]
        if cur >= 0:
            return cur == b
        if used[i][b]:
            return False
        img[i][a] = b
        used[i][b] = True
        trail.append((i, a))
        queue.append((i, a))
        return True

    def propagate(queue):
        while queue:
            i, a = queue.pop()
            for w in occ[i][a]:
                row = rows[w]
                missing = -1
                n_missing = 0
                for t in range(n):
                    if img[t][row[t]] < 0:
                        missing = t
                        n_missing += 1
                        if n_missing > 1:
                            break
                if n_missing > 1:
                    continue
                j = n - 1 if n_missing == 0 else missing
                wj = weights[j]
                code = 0
                for t in range(n):
                    if t != j:
                        code += wj[t] * img[t][row[t]]
                forced = solve[j][code]
                if n_missing == 0:
                    if img[j][row[j]] != forced:
                        return False
                elif not assign(j, row[j], forced, queue):
                    return False
        return True

    def undo(mark):
        while len(trail) > mark:
            i, a = trail.pop()
            used[i][img[i][a]] = False
            img[i][a] = -1

    def search():
        for i in range(n):
            for a in range(s):
                if img[i][a] < 0:
                    break
            else:
                continue
            break
        else:
            return True
        for b in range(s):
            if used[i][b]:
                continue
            mark = len(trail)
            queue = []
            if assign(i, a, b, queue) and propagate(queue) and search():
                return True
            undo(mark)
        return False

    if n_words == 0:
        return None
    if search():
        return np.array(img, dtype=np.int64)
    return None
