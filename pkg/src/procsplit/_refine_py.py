"""Pure-Python signature refinement; reference behaviour for the compiled kernel."""


def refine(n, src, lab, dst, init):
    """Coarsest stable partition of states ``0..n-1``.

    ``src``/``lab``/``dst`` are parallel integer sequences describing the
    transitions, ``init`` gives each state's initial block.  Returns a list of
    block ids.  Blocks are numbered by the sorted order of their signatures, so
    the result is canonical for a given input.
    """
    out = [[] for _ in range(n)]
    for s, a, t in zip(src, lab, dst):
        out[s].append((a, t))
    block = _renumber([(int(b),) for b in init])
    count = len(set(block))
    while True:
        nb = count
        sigs = []
        for s in range(n):
            keys = sorted({a * nb + block[t] for a, t in out[s]})
            sigs.append((block[s], *keys))
        block = _renumber(sigs)
        new_count = len(set(block))
        if new_count == count:
            return block
        count = new_count


def _renumber(sigs):
    ids = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
    return [ids[sig] for sig in sigs]
