import os
import subprocess
import sys


def run_smoke_check():
    """用一次 n=3 的验证矩阵确认环境可用"""
    result = subprocess.run([sys.executable, 'run.py', 'verify', '--suite', 'all', '-n', '3'],
                            capture_output=True, text=True, encoding='utf-8')
    print(result.stdout or result.stderr)
    return result.returncode == 0


def setup_environment():
    """写入默认的 .env，并用一次小规模验证确认环境可用"""
    env_file = '.env'
    if not os.path.exists(env_file):
        print("未找到 .env 文件，正在创建...")
        with open(env_file, 'w', encoding='utf-8') as f:
            f.write("# --- crossconn size guards ---\n")
            f.write("# 完整凯莱表与穷举验证的最大 n\n")
            f.write("CROSSCONN_MAX_TABLE_N=4\n")
            f.write("# 交叉连接搜索的最大 n，以及用完整局部同构检查复核的最大 n\n")
            f.write("CROSSCONN_MAX_SEARCH_N=5\n")
            f.write("CROSSCONN_RECHECK_MAX_N=4\n")
            f.write("CROSSCONN_MAX_NATURALITY_N=3\n")
            f.write("CROSSCONN_MAX_IDEAL_N=5\n")
            f.write("CROSSCONN_P_OBJECT_CAP=3\n\n")
            f.write("# --- Logging ---\n")
            f.write("LOG_LEVEL=INFO\n")
        print("已成功生成 .env 文件。")
    else:
        print(".env 文件已存在，将跳过创建。")

    print("\n正在运行冒烟验证...")
    if run_smoke_check():
        print("环境配置成功！")
    else:
        print("\n冒烟验证失败。请检查上面的错误信息。")
        sys.exit(1)


if __name__ == '__main__':
    print("--- 开始配置 crossconn ---")
    setup_environment()
    print("\n--- 项目配置完成！---")
    print("现在您可以运行 'python run.py verify --suite all -n 3' 或 'flask --app run crossconn enumerate -n 4'。")
