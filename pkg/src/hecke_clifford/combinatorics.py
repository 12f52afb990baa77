"""Mixed multipartitions, standard tableaux, diagonal data and Z2 index sets.

Boxes are triples ``(i, j, c)`` with 1-based row ``i`` and column ``j`` and
``c`` the 0-based position of the component in ``Shape.labels``.  Strict
components are drawn shifted: row ``i`` occupies columns ``i .. i+part-1``.
Z2 vectors are bitmasks where bit ``k-1`` stands for the letter ``k``.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

from . import scalars as sc


def partitions(n, max_part=None):
    """Partitions of n as weakly decreasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def strict_partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in strict_partitions(n - first, first - 1):
            out.append((first,) + rest)
    return out


def compositions(n, k):
    """Ordered k-tuples of nonnegative integers summing to n."""
    if k == 0:
        return [()] if n == 0 else []
    if k == 1:
        return [(n,)]
    return [(a,) + rest for a in range(n, -1, -1) for rest in compositions(n - a, k - 1)]


@dataclass(frozen=True)
class Shape:
    """A mixed multipartition: strict components first, then ordinary ones."""
    bullet: str
    labels: tuple
    parts: tuple

    @property
    def n(self):
        return sum(sum(p) for p in self.parts)

    def is_strict(self, c):
        return self.labels[c] in ("0", "0-", "0+")

    @cached_property
    def boxes(self):
        """All boxes, component-major and row-major (the order of t^lambda)."""
        out = []
        for c, part in enumerate(self.parts):
            shift = self.is_strict(c)
            for i, length in enumerate(part, start=1):
                start = i if shift else 1
                for j in range(start, start + length):
                    out.append((i, j, c))
        return tuple(out)

    @cached_property
    def index(self):
        return {b: k for k, b in enumerate(self.boxes)}

    @cached_property
    def diagonal_boxes(self):
        """Boxes (a, a, l) in strict components."""
        return tuple(b for b in self.boxes if self.is_strict(b[2]) and b[0] == b[1])

    def __str__(self):
        comps = ",".join("(" + ",".join(map(str, p)) + ")" for p in self.parts)
        return f"({comps})"

    def to_json(self):
        return {"bullet": self.bullet, "labels": list(self.labels),
                "parts": [list(p) for p in self.parts]}


def enumerate_multipartitions(params, n=None):
    """All shapes of size n (default params.n) for the configuration."""
    n = params.n if n is None else n
    labels = tuple(params.labels())
    nstrict = len(params.strict_labels())
    out = []
    for sizes in compositions(n, len(labels)):
        choices = []
        for c, size in enumerate(sizes):
            choices.append(strict_partitions(size) if c < nstrict else partitions(size))
        for parts in product(*choices):
            out.append(Shape(params.bullet, labels, tuple(parts)))
    return out


@dataclass(frozen=True)
class Tableau:
    """A filling of a shape; ``entries[k]`` is the letter in ``shape.boxes[k]``."""
    shape: Shape
    entries: tuple

    @property
    def n(self):
        return len(self.entries)

    @cached_property
    def box_of(self):
        """Map letter -> box."""
        return {e: b for b, e in zip(self.shape.boxes, self.entries)}

    def entry(self, box):
        return self.entries[self.shape.index[box]]

    def is_standard(self):
        for (i, j, c), e in zip(self.shape.boxes, self.entries):
            left = (i, j - 1, c)
            up = (i - 1, j, c)
            if left in self.shape.index and self.entry(left) > e:
                return False
            if up in self.shape.index and self.entry(up) > e:
                return False
        return True

    def act(self, perm):
        """The tableau w.t, whose box entries are w(t(box))."""
        return Tableau(self.shape, tuple(perm[e - 1] for e in self.entries))

    def swap(self, i):
        """s_i . t."""
        return self.act(transposition(self.n, i))

    def rows(self):
        """Nested lists of entries, one list of rows per component."""
        out = []
        for c, part in enumerate(self.shape.parts):
            comp = []
            for i in range(1, len(part) + 1):
                comp.append([e for (bi, bj, bc), e in zip(self.shape.boxes, self.entries)
                             if bc == c and bi == i])
            out.append(comp)
        return out

    def __str__(self):
        return str(self.rows())


def enumerate_std(shape):
    """All standard tableaux of a shape."""
    boxes = shape.boxes
    index = shape.index
    n = len(boxes)
    preds = []
    for (i, j, c) in boxes:
        p = [index[b] for b in ((i, j - 1, c), (i - 1, j, c)) if b in index]
        preds.append(p)
    out = []
    filling = [0] * n

    def grow(k):
        if k > n:
            out.append(Tableau(shape, tuple(filling)))
            return
        for pos in range(n):
            if filling[pos] == 0 and all(filling[p] for p in preds[pos]):
                filling[pos] = k
                grow(k + 1)
                filling[pos] = 0

    grow(1)
    return out


def row_tableau(shape):
    """t^lambda: letters 1..n by rows from the first component."""
    return Tableau(shape, tuple(range(1, shape.n + 1)))


def column_tableau(shape):
    """t_lambda: letters 1..n by columns from the last component."""
    entries = [0] * shape.n
    k = 1
    for c in reversed(range(len(shape.parts))):
        cols = sorted({b[1] for b in shape.boxes if b[2] == c})
        for j in cols:
            for b in sorted(b for b in shape.boxes if b[2] == c and b[1] == j):
                entries[shape.index[b]] = k
                k += 1
    return Tableau(shape, tuple(entries))


# permutations: tuples p with p[k-1] = w(k)

def identity_perm(n):
    return tuple(range(1, n + 1))


def transposition(n, i):
    p = list(range(1, n + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def compose(w, v):
    """(w v)(k) = w(v(k))."""
    return tuple(w[v[k] - 1] for k in range(len(v)))


def inverse(w):
    out = [0] * len(w)
    for k, wk in enumerate(w, start=1):
        out[wk - 1] = k
    return tuple(out)


def length(w):
    n = len(w)
    return sum(1 for a in range(n) for b in range(a + 1, n) if w[a] > w[b])


def reduced_word(w):
    """Lexicographically smallest reduced word [j1, ..., jk] with w = s_j1 ... s_jk."""
    word = []
    w = tuple(w)
    n = len(w)
    while True:
        winv = inverse(w)
        for i in range(1, n):
            if winv[i - 1] > winv[i]:
                word.append(i)
                w = compose(transposition(n, i), w)
                break
        else:
            return word


def reduced_words(w):
    """Every reduced word [j1, ..., jk] with w = s_j1 ... s_jk."""
    w = tuple(w)
    n = len(w)
    if length(w) == 0:
        return [[]]
    out = []
    winv = inverse(w)
    for i in range(1, n):
        if winv[i - 1] > winv[i]:
            rest = compose(transposition(n, i), w)
            out.extend([i] + word for word in reduced_words(rest))
    return out


def word_to_perm(word, n):
    w = identity_perm(n)
    for i in word:
        w = compose(w, transposition(n, i))
    return w


def d_perm(s, t):
    """The permutation d with s = d.t, and its lexicographically least reduced word.

    The word [j1, ..., jk] means d = s_j1 ... s_jk, so s_jk acts on t first.
    """
    if s.shape != t.shape:
        raise ValueError("tableaux have different shapes")
    d = [0] * s.n
    for es, et in zip(s.entries, t.entries):
        d[et - 1] = es
    d = tuple(d)
    return d, reduced_word(d)


@dataclass(frozen=True)
class DiagonalData:
    """Diagonal letters of a tableau.

    ``dseq[p-1]`` is d(t, t^lambda)(i_p), so ``dseq`` follows the order of
    i_1 < ... < i_t in t^lambda rather than the numeric order of the letters.
    """
    dseq: tuple

    @property
    def size(self):
        return len(self.dseq)

    @property
    def D(self):
        return frozenset(self.dseq)

    @property
    def D_mask(self):
        return mask_of(self.dseq)

    @property
    def OD(self):
        return tuple(self.dseq[0::2])

    @property
    def OD_mask(self):
        return mask_of(self.OD)

    @property
    def d_lambda(self):
        return self.size % 2

    @property
    def last(self):
        """d(t, t^lambda)(i_t), or None when there are no diagonal letters."""
        return self.dseq[-1] if self.dseq else None

    def position(self, k):
        """p with k = d(i_p), or None."""
        try:
            return self.dseq.index(k) + 1
        except ValueError:
            return None

    @property
    def hat_mask0(self):
        """d(i_1), d(i_3), ..., d(i_{2 floor(t/2) - 1})."""
        return mask_of(self.dseq[0:2 * (self.size // 2):2])


def diagonal_data(t):
    tl = row_tableau(t.shape)
    boxes = sorted(t.shape.diagonal_boxes, key=tl.entry)
    return DiagonalData(tuple(t.entry(b) for b in boxes))


def residue(box, shape, params):
    i, j, c = box
    Ql = params.Q_of(shape.labels[c])
    if params.nondegenerate:
        return Ql * sc.power(sc.power(params.q, 2), j - i)
    return Ql + (j - i)


def res_seq(t, params):
    return [residue(t.box_of[k], t.shape, params) for k in range(1, t.n + 1)]


def q_seq(t, params):
    return [sc.q_of(r, params) for r in res_seq(t, params)]


def separate_check(params, n=None, detail=False):
    """Brute-force separateness at size n+1.

    Returns True/False, or with ``detail`` a pair (ok, offending) where
    offending is (tableau, k) for the first failure.
    """
    n = params.n if n is None else n
    for shape in enumerate_multipartitions(params, n + 1):
        for t in enumerate_std(shape):
            qs = q_seq(t, params)
            for k in range(len(qs) - 1):
                if sc.close(qs[k], qs[k + 1], params.tolerance):
                    return (False, (t, k + 1)) if detail else False
    return (True, None) if detail else True


# Z2 vectors as bitmasks

def bit(k):
    return 1 << (k - 1)


def mask_of(letters):
    m = 0
    for k in letters:
        m |= bit(k)
    return m


def has(mask, k):
    return (mask >> (k - 1)) & 1


def popcount(mask):
    return bin(mask).count("1")


def count_lt(mask, i):
    """|mask|_{<i}."""
    return popcount(mask & (bit(i) - 1))


def count_le(mask, i):
    return popcount(mask & ((bit(i) << 1) - 1))


def count_gt(mask, i):
    return popcount(mask >> i)


def count_ge(mask, i):
    return popcount(mask >> (i - 1))


def nu(mask, k):
    """nu_beta(k) = +1 if beta_k = 0 else -1."""
    return -1 if has(mask, k) else 1


def swap_bits(mask, i):
    """s_i acting on a Z2 vector: exchange positions i and i+1."""
    a, b = has(mask, i), has(mask, i + 1)
    if a == b:
        return mask
    return mask ^ bit(i) ^ bit(i + 1)


def submasks(mask):
    """All masks with support inside mask, in increasing order."""
    out = []
    sub = 0
    while True:
        out.append(sub)
        if sub == mask:
            return out
        sub = (sub - mask) & mask


def full_mask(n):
    return (1 << n) - 1


def z2_sets(t):
    """(Z2([n] minus D), Z2(OD), Z2(OD)_0, Z2(OD)_1) as lists of masks."""
    dd = diagonal_data(t)
    betas = submasks(full_mask(t.n) & ~dd.D_mask)
    alphas = submasks(dd.OD_mask)
    if dd.d_lambda:
        last = bit(dd.last)
        even = [a for a in alphas if not a & last]
        odd = [a for a in alphas if a & last]
    else:
        even, odd = alphas, []
    return betas, alphas, even, odd


def sector(alpha, dd):
    if dd.d_lambda and alpha & bit(dd.last):
        return 1
    return 0


def shift_sector(alpha, dd, a):
    """alpha_{t,a} from alpha in the 0 sector."""
    if a % 2 == 0:
        return alpha
    if not dd.d_lambda:
        raise ValueError("the odd sector exists only when d_lambda = 1")
    return alpha | bit(dd.last)


def hat(alpha, dd, sec=None):
    """The complement of alpha inside its sector.

    Sector 0: complement within d(i_1), d(i_3), ..., d(i_{2 floor(t/2)-1}).
    Sector 1: hat(alpha_0 + e_last) = hat(alpha_0) + e_last.
    """
    actual = sector(alpha, dd)
    if sec is not None and sec != actual:
        raise ValueError("alpha is not in the requested sector")
    if alpha & ~dd.OD_mask:
        raise ValueError("alpha is not supported on OD_t")
    if actual == 0:
        return alpha ^ dd.hat_mask0
    return (alpha ^ bit(dd.last)) ^ dd.hat_mask0 | bit(dd.last)


def sgn(alpha, dd, a=0):
    """The sign sgn(t, alpha) (d_lambda = 0) or sgn(t, alpha)_a (d_lambda = 1)."""
    odd = dd.dseq[0::2]
    tt = dd.size
    if dd.d_lambda == 0:
        first_range = tt // 2
        pair_range = tt // 2
    else:
        first_range = (tt + 1) // 2
        pair_range = tt // 2 if a % 2 == 0 else (tt + 1) // 2
    e = 0
    for j in range(first_range):
        e += count_gt(alpha, odd[j])
    for j in range(pair_range):
        for jp in range(j):
            e += count_gt(bit(odd[jp]), odd[j])
    return -1 if e % 2 else 1


@lru_cache(maxsize=None)
def std_all(params):
    """All standard tableaux over every shape of size params.n."""
    out = []
    for shape in enumerate_multipartitions(params):
        out.extend(enumerate_std(shape))
    return tuple(out)
