# conftest.py
import os
import sys

# 角色目录（algebra/、homotopy/、commands/、utils/）没有 __init__.py，按项目根目录导入
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
