from dataclasses import dataclass
from functools import cached_property

from app.errors import InvalidObjectError, GroundSetMismatchError


def _mask_members(mask):
    members = []
    x = 1
    while mask:
        if mask & 1:
            members.append(x)
        mask >>= 1
        x += 1
    return tuple(members)


def same_ground(*values):
    """确保所有值定义在同一个基集上，返回公共的 n。"""
    sizes = {value.n for value in values}
    if len(sizes) != 1:
        raise GroundSetMismatchError(f"ground sets differ: {sorted(sizes)}")
    return sizes.pop()


@dataclass(frozen=True)
class GroundSet:
    """有限基集 X = {1..n}，要求 n >= 2。"""
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidObjectError(f"ground set needs at least two elements, got n={self.n!r}")

    @property
    def elements(self):
        return range(1, self.n + 1)

    @property
    def full_mask(self):
        return (1 << self.n) - 1


def as_ground(n):
    if isinstance(n, GroundSet):
        return n
    return GroundSet(n)


@dataclass(frozen=True)
class SubsetObject:
    """
    𝒫(X) 的对象：X 的非空真子集。
    内部用位掩码表示，第 x-1 位对应元素 x。
    """
    n: int
    mask: int

    def __post_init__(self):
        full = as_ground(self.n).full_mask
        if self.mask <= 0 or self.mask >= full:
            raise InvalidObjectError(f"subset must be nonempty and proper, got mask {self.mask:#b} for n={self.n}")

    @classmethod
    def from_members(cls, n, members):
        mask = 0
        for x in members:
            if not 1 <= x <= n:
                raise InvalidObjectError(f"element {x} is outside 1..{n}")
            mask |= 1 << (x - 1)
        return cls(n, mask)

    @classmethod
    def parse(cls, text, n):
        body = text.strip()
        if not (body.startswith('{') and body.endswith('}')):
            raise InvalidObjectError(f"subset literal must look like '{{1,3}}', got {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            raise InvalidObjectError("subset literal is empty")
        try:
            members = [int(part) for part in inner.split(',')]
        except ValueError:
            raise InvalidObjectError(f"bad subset literal {text!r}") from None
        return cls.from_members(n, members)

    @cached_property
    def members(self):
        return _mask_members(self.mask)

    @property
    def size(self):
        return len(self.members)

    @property
    def minimum(self):
        return (self.mask & -self.mask).bit_length()

    @property
    def ground(self):
        return GroundSet(self.n)

    def issubset(self, other):
        same_ground(self, other)
        return self.mask & ~other.mask == 0

    def sort_key(self):
        return (self.size, self.members)

    def __contains__(self, x):
        return 1 <= x <= self.n and (self.mask >> (x - 1)) & 1 == 1

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return self.size

    def __str__(self):
        return '{' + ','.join(str(x) for x in self.members) + '}'


@dataclass(frozen=True)
class SetPartition:
    """
    X 的非恒等划分，同时看作等价关系。
    block_of[x-1] 是元素 x 所在块的编号，块按最小元素出现的顺序从 0 开始编号。
    """
    n: int
    block_of: tuple

    def __post_init__(self):
        as_ground(self.n)
        if len(self.block_of) != self.n:
            raise InvalidObjectError(f"partition labels must have length {self.n}")
        top = -1
        for label in self.block_of:
            if label > top + 1 or label < 0:
                raise InvalidObjectError(f"partition labels {self.block_of} are not canonical")
            top = max(top, label)
        if top + 1 == self.n:
            raise InvalidObjectError("the identity partition is not an object of Π(X)")

    @classmethod
    def from_labels(cls, labels):
        """按首次出现的顺序重新编号任意标签序列。"""
        renumber = {}
        canonical = tuple(renumber.setdefault(label, len(renumber)) for label in labels)
        return cls(len(canonical), canonical)

    @classmethod
    def from_blocks(cls, n, blocks):
        labels = [None] * n
        for index, block in enumerate(blocks):
            for x in block:
                if not 1 <= x <= n or labels[x - 1] is not None:
                    raise InvalidObjectError(f"blocks {blocks} do not partition 1..{n}")
                labels[x - 1] = index
        if None in labels:
            raise InvalidObjectError(f"blocks {blocks} do not cover 1..{n}")
        return cls.from_labels(labels)

    @classmethod
    def parse(cls, text):
        parts = text.strip().split('|')
        try:
            blocks = [[int(ch) for ch in part.strip()] for part in parts]
        except ValueError:
            raise InvalidObjectError(f"bad partition literal {text!r}") from None
        if any(not block for block in blocks):
            raise InvalidObjectError(f"empty block in partition literal {text!r}")
        n = sum(len(block) for block in blocks)
        return cls.from_blocks(n, blocks)

    @cached_property
    def num_blocks(self):
        return max(self.block_of) + 1

    @cached_property
    def blocks(self):
        grouped = [[] for _ in range(self.num_blocks)]
        for x, label in enumerate(self.block_of, start=1):
            grouped[label].append(x)
        return tuple(tuple(block) for block in grouped)

    @cached_property
    def block_masks(self):
        masks = [0] * self.num_blocks
        for x, label in enumerate(self.block_of, start=1):
            masks[label] |= 1 << (x - 1)
        return tuple(masks)

    @cached_property
    def minima(self):
        return tuple(block[0] for block in self.blocks)

    @property
    def ground(self):
        return GroundSet(self.n)

    def block_index(self, x):
        return self.block_of[x - 1]

    def block_containing(self, x):
        return self.blocks[self.block_of[x - 1]]

    def related(self, x, y):
        return self.block_of[x - 1] == self.block_of[y - 1]

    def __str__(self):
        return '|'.join(''.join(str(x) for x in block) for block in self.blocks)


@dataclass(frozen=True)
class Transformation:
    """X 上的全变换，images[x-1] 为 x 的像（从左到右复合）。"""
    images: tuple

    def __post_init__(self):
        n = len(self.images)
        as_ground(n)
        for value in self.images:
            if not 1 <= value <= n:
                raise InvalidObjectError(f"image {value} is outside 1..{n}")

    @classmethod
    def parse(cls, text):
        try:
            return cls(tuple(int(part) for part in text.strip().split(',')))
        except ValueError:
            raise InvalidObjectError(f"bad transformation literal {text!r}") from None

    @property
    def n(self):
        return len(self.images)

    @property
    def ground(self):
        return GroundSet(self.n)

    @cached_property
    def image_mask(self):
        mask = 0
        for value in self.images:
            mask |= 1 << (value - 1)
        return mask

    @property
    def rank(self):
        return bin(self.image_mask).count('1')

    @property
    def is_singular(self):
        return self.rank < self.n

    @cached_property
    def image(self):
        return SubsetObject(self.n, self.image_mask)

    @cached_property
    def kernel(self):
        return SetPartition.from_labels(self.images)

    def __call__(self, x):
        return self.images[x - 1]

    def __str__(self):
        return ','.join(str(value) for value in self.images)


@dataclass(frozen=True)
class Permutation:
    """X 上的置换。"""
    images: tuple

    def __post_init__(self):
        n = len(self.images)
        as_ground(n)
        if sorted(self.images) != list(range(1, n + 1)):
            raise InvalidObjectError(f"{self.images} is not a bijection of 1..{n}")

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text):
        try:
            return cls(tuple(int(part) for part in text.strip().split(',')))
        except ValueError:
            raise InvalidObjectError(f"bad permutation literal {text!r}") from None

    @property
    def n(self):
        return len(self.images)

    @property
    def ground(self):
        return GroundSet(self.n)

    @cached_property
    def inverse(self):
        inverse = [0] * self.n
        for x, y in enumerate(self.images, start=1):
            inverse[y - 1] = x
        return Permutation(tuple(inverse))

    @property
    def is_identity(self):
        return self.images == tuple(range(1, self.n + 1))

    def as_transformation(self):
        # 置换不在 Sing(X) 中，但可以参与复合
        return Transformation(self.images)

    def __call__(self, x):
        return self.images[x - 1]

    def __str__(self):
        return ','.join(str(value) for value in self.images)
