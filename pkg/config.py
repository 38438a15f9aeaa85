import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    # 完整凯莱表（T𝒫、TΠ、交叉连接半群）允许的最大 n
    CROSSCONN_MAX_TABLE_N = int(os.environ.get('CROSSCONN_MAX_TABLE_N') or 4)
    # 置换搜索允许的最大 n
    CROSSCONN_MAX_SEARCH_N = int(os.environ.get('CROSSCONN_MAX_SEARCH_N') or 5)
    # 搜索结果用完整局部同构检查复核的最大 n
    CROSSCONN_RECHECK_MAX_N = int(os.environ.get('CROSSCONN_RECHECK_MAX_N') or 4)
    # χ 自然性方块逐态射对穷举的最大 n
    CROSSCONN_MAX_NATURALITY_N = int(os.environ.get('CROSSCONN_MAX_NATURALITY_N') or 3)
    CROSSCONN_MAX_IDEAL_N = int(os.environ.get('CROSSCONN_MAX_IDEAL_N') or 5)
    # 𝒫(X) 正规范畴穷举检查中对象大小的默认上限
    CROSSCONN_P_OBJECT_CAP = int(os.environ.get('CROSSCONN_P_OBJECT_CAP') or 3)
    # 字面量使用单个数字表示元素
    CROSSCONN_MAX_LITERAL_N = 9
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'
