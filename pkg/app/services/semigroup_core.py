import csv
import io
import json
import logging
from itertools import combinations

import numpy as np

from config import Config
from app.errors import ClosureError, MorphismError, check_guard
from app.models import same_ground
from app.services.foundation import enumerate_sing

logger = logging.getLogger(__name__)


class CayleyTable:
    """
    有限半群：roster 是元素序列，table[i, j] 是 roster[i]·roster[j] 的下标。
    以 _idx 结尾的方法直接在下标上操作。
    """

    def __init__(self, roster, table, name="semigroup"):
        self.roster = list(roster)
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name
        size = len(self.roster)
        if self.table.shape != (size, size):
            raise MorphismError(f"table shape {self.table.shape} does not match a roster of {size}")
        if size and (self.table.min() < 0 or self.table.max() >= size):
            raise ClosureError(f"{self.name}: table has entries outside the roster")
        self._index = None

    @classmethod
    def from_product(cls, roster, mult, name="semigroup"):
        """用任意二元运算逐对构造乘法表，结果必须落回 roster。"""
        roster = list(roster)
        lookup = {element: i for i, element in enumerate(roster)}
        table = np.zeros((len(roster), len(roster)), dtype=np.int64)
        for i, a in enumerate(roster):
            for j, b in enumerate(roster):
                value = mult(a, b)
                if value not in lookup:
                    raise ClosureError(f"{name}: {a} * {b} = {value} is not in the roster")
                table[i, j] = lookup[value]
        return cls(roster, table, name=name)

    def __len__(self):
        return len(self.roster)

    def index_of(self, element):
        if self._index is None:
            self._index = {value: i for i, value in enumerate(self.roster)}
        return self._index[element]

    def product(self, a, b):
        return self.roster[self.product_idx(self.index_of(a), self.index_of(b))]

    def product_idx(self, i, j):
        return self.table[i, j].item()

    def opposite(self):
        return CayleyTable(self.roster, self.table.T.copy(), name=f"{self.name}^op")

    def labels(self):
        return [str(element) for element in self.roster]

    def to_json(self):
        return json.dumps({"roster": self.labels(), "table": self.table.tolist()})

    def to_csv(self):
        """首行是标签表头，之后每行以行元素开头，单元格为乘积的标签。"""
        labels = self.labels()
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow([''] + labels)
        for i, row in enumerate(self.table.tolist()):
            writer.writerow([labels[i]] + [labels[k] for k in row])
        return buffer.getvalue()

    def __repr__(self):
        return f"CayleyTable({self.name}, order={len(self)})"


def transformation_table(roster, sandwich=None, name="transformations"):
    """
    变换集合在从左到右复合下的乘法表，可选夹心元 θ：a ∗ b = a·θ·b。
    按行分块向量化；乘积不在 roster 中时抛出 ClosureError。
    """
    roster = list(roster)
    if not roster:
        return CayleyTable([], np.zeros((0, 0), dtype=np.int64), name=name)
    n = same_ground(*roster) if len(roster) > 1 else roster[0].n
    images = np.array([a.images for a in roster], dtype=np.int64) - 1
    if sandwich is not None:
        same_ground(sandwich, roster[0])
        middle = np.array(sandwich.images, dtype=np.int64) - 1
    else:
        middle = np.arange(n)

    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = images @ weights
    order = np.argsort(codes, kind='stable')
    sorted_codes = codes[order]

    table = np.empty((len(roster), len(roster)), dtype=np.int64)
    for i in range(len(roster)):
        # 第 j 行：x ↦ b_j(θ(a_i(x)))
        products = images[:, middle[images[i]]]
        product_codes = products @ weights
        positions = np.searchsorted(sorted_codes, product_codes)
        positions = np.minimum(positions, len(roster) - 1)
        found = sorted_codes[positions] == product_codes
        if not found.all():
            j = int(np.flatnonzero(~found)[0])
            raise ClosureError(f"{name}: product of {roster[i]} and {roster[j]} leaves the roster")
        table[i, :] = order[positions]
    logger.debug(f"{name} 乘法表构造完成，阶为 {len(roster)}")
    return CayleyTable(roster, table, name=name)


def sing_table(n, max_n=None):
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "Sing(X) table")
    table = transformation_table(enumerate_sing(n), name=f"Sing({n})")
    logger.info(f"Sing({n}) 乘法表：{len(table)} 个元素")
    return table


def check_associative(t):
    table = t.table
    for x in range(len(t)):
        # (xy)z 与 x(yz)，对全部 y, z 同时比较
        if not np.array_equal(table[table[x]], table[x][table]):
            logger.warning(f"{t.name} 在首元 {t.roster[x]} 处不满足结合律")
            return False
    return True


def idempotents(t):
    diagonal = np.diagonal(t.table)
    return [int(i) for i in np.flatnonzero(diagonal == np.arange(len(t)))]


def is_regular(t):
    """∀a ∃x: axa = a。"""
    table = t.table
    for a in range(len(t)):
        if not np.any(table[table[a, :], a] == a):
            logger.debug(f"{t.name}: {t.roster[a]} 不是正则元")
            return False
    return True


def is_right_reductive(t):
    """右正则表示 a ↦ (s ↦ sa) 单射，即乘法表的各列两两不同。"""
    if len(t) == 0:
        return True
    distinct = np.unique(t.table.T, axis=0).shape[0]
    return distinct == len(t)


def is_right_reductive_bruteforce(t):
    table = t.table
    for a, b in combinations(range(len(t)), 2):
        if all(table[s, a] == table[s, b] for s in range(len(t))):
            return False
    return True


def _index_map(t1, t2, mapping):
    if callable(mapping):
        try:
            indices = [t2.index_of(mapping(x)) for x in t1.roster]
        except KeyError as exc:
            raise MorphismError(f"map is not total from {t1.name} into {t2.name}: {exc}") from None
    else:
        indices = list(mapping)
        if len(indices) != len(t1):
            raise MorphismError(f"map covers {len(indices)} of {len(t1)} elements of {t1.name}")
    indices = np.asarray(indices, dtype=np.int64)
    if len(indices) and (indices.min() < 0 or indices.max() >= len(t2)):
        raise MorphismError(f"map sends elements outside {t2.name}")
    return indices


def hom_violation(t1, t2, mapping, anti=False):
    """返回第一个 (x, y) 使 map(xy) 与 map(x)map(y)（anti 时为 map(y)map(x)）不同，否则 None。"""
    m = _index_map(t1, t2, mapping)
    target = t2.table[np.ix_(m, m)]
    if anti:
        target = target.T
    mismatch = m[t1.table] != target
    if not mismatch.any():
        return None
    x, y = np.argwhere(mismatch)[0]
    return t1.roster[x], t1.roster[y]


def verify_hom(t1, t2, mapping):
    return hom_violation(t1, t2, mapping) is None


def _is_bijection(t1, t2, mapping):
    m = _index_map(t1, t2, mapping)
    return len(t1) == len(t2) and len(np.unique(m)) == len(t2)


def verify_iso(t1, t2, mapping):
    return _is_bijection(t1, t2, mapping) and verify_hom(t1, t2, mapping)


def verify_anti_iso(t1, t2, mapping):
    return _is_bijection(t1, t2, mapping) and hom_violation(t1, t2, mapping, anti=True) is None
