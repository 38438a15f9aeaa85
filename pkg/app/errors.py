"""
crossconn 的异常层级。

数学上的违例（例如某个分解没有复合回原态射）不抛异常，
而是由各个 verify_* 函数以 (is_valid, errors) 的形式返回。
这里的异常只用于非法输入和超出配置上限的请求。
"""


class CrossConnError(ValueError):
    """所有 crossconn 异常的基类。"""


class GroundSetMismatchError(CrossConnError):
    """两个值定义在不同的基集上。"""


class InvalidObjectError(CrossConnError):
    """值违反了其类型不变量，或字面量无法解析。"""


class MorphismError(CrossConnError):
    """态射的定义域、陪域或子对象顺序不匹配。"""


class SizeGuardError(CrossConnError):
    """请求的 n 超出了配置的穷举上限。"""


class NotTotalError(CrossConnError):
    """理想不是全理想（某个极大真子集不是任何成员划分的截面）。"""


class ClosureError(CrossConnError):
    """构造出的元素表在乘法下不封闭。"""


def check_guard(n, limit, what):
    """超出上限时抛出 SizeGuardError。"""
    if n > limit:
        raise SizeGuardError(f"{what}: n={n} exceeds the configured limit {limit}")
