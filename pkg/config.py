import sys
from typing import Any, Dict, Tuple


class ConfigMeta(type):
    """元类，用于实现类级别的__getattr__"""

    def __getattr__(cls, name: str) -> Any:
        """动态获取配置属性"""
        return cls._get_config_value(name)


class Config(metaclass=ConfigMeta):
    """应用配置类 - 使用元类实现延迟读取配置项

    不读取环境变量：所有覆盖值只来自命令行参数（见 cli.py）。
    """

    _overrides: Dict[str, Any] = {}

    @classmethod
    def override(cls, **values: Any) -> None:
        """用命令行参数覆盖默认配置"""
        for key, value in values.items():
            if value is not None:
                cls._overrides[key] = value

    @classmethod
    def reset(cls) -> None:
        """恢复默认配置（测试用）"""
        cls._overrides.clear()

    @classmethod
    def _get(cls, key: str, default: Any) -> Any:
        return cls._overrides.get(key, default)

    @classmethod
    def _get_config_value(cls, name: str) -> Any:
        """动态获取配置属性"""
        # 规模控制
        if name == "BASIS_CAP":
            return int(cls._get("BASIS_CAP", 1_000_000))
        elif name == "MAX_JOBS":
            return int(cls._get("MAX_JOBS", 1))

        # 随机检验配置
        elif name == "DEFAULT_SEED":
            return int(cls._get("DEFAULT_SEED", 12345))
        elif name == "DEFAULT_TRIALS":
            return int(cls._get("DEFAULT_TRIALS", 20))
        elif name == "LAPLACE_SPOT_CHECKS":
            return int(cls._get("LAPLACE_SPOT_CHECKS", 50))
        elif name == "RANDOM_ENTRY_BOUND":
            return int(cls._get("RANDOM_ENTRY_BOUND", 3))

        # 检验项配置
        elif name == "DEFAULT_FIELD":
            return cls._get("DEFAULT_FIELD", "q")
        elif name == "SUPPORTED_PRIMES":
            return tuple(cls._get("SUPPORTED_PRIMES", (2, 3, 5, 7)))
        elif name == "ALL_CHECKS":
            return ("square-zero", "exactness", "euler", "hilbert",
                    "equivariance", "spectral", "bar", "ext")
        elif name == "DEFAULT_CHECKS":
            return tuple(cls._get("DEFAULT_CHECKS", ("square-zero", "exactness", "euler")))
        elif name == "HILBERT_TRUNCATION":
            return int(cls._get("HILBERT_TRUNCATION", 8))

        # 应用配置
        elif name == "TOOL_VERSION":
            return "1.0.0"
        elif name == "DEBUG":
            return bool(cls._get("DEBUG", False))

        # 如果属性不存在，抛出AttributeError
        raise AttributeError(f"'{cls.__name__}' object has no attribute '{name}'")

    @classmethod
    def validate_config(cls) -> bool:
        """验证配置是否正确"""
        if cls.BASIS_CAP <= 0:
            print(f"❌ BASIS_CAP 必须为正数，当前为 {cls.BASIS_CAP}", file=sys.stderr)
            return False
        bad_primes: Tuple[int, ...] = tuple(p for p in cls.SUPPORTED_PRIMES if p not in (2, 3, 5, 7))
        if bad_primes:
            print(f"❌ 不支持的素数域: {bad_primes}", file=sys.stderr)
            return False
        if cls.DEFAULT_TRIALS <= 0 or cls.LAPLACE_SPOT_CHECKS <= 0:
            print("❌ 随机检验次数必须为正数", file=sys.stderr)
            return False
        if cls.MAX_JOBS <= 0:
            print("❌ MAX_JOBS 必须为正数", file=sys.stderr)
            return False
        return True

    @classmethod
    def print_config(cls):
        """打印当前配置"""
        print("=== 当前配置 ===", file=sys.stderr)
        print(f"版本: {cls.TOOL_VERSION}", file=sys.stderr)
        print(f"调试模式: {cls.DEBUG}", file=sys.stderr)
        print(f"基元素上限: {cls.BASIS_CAP}", file=sys.stderr)
        print(f"默认域: {cls.DEFAULT_FIELD}", file=sys.stderr)
        print(f"默认检验: {', '.join(cls.DEFAULT_CHECKS)}", file=sys.stderr)
        print(f"随机种子: {cls.DEFAULT_SEED}", file=sys.stderr)
        print(f"随机试验次数: {cls.DEFAULT_TRIALS}", file=sys.stderr)
        print(f"Laplace抽检次数: {cls.LAPLACE_SPOT_CHECKS}", file=sys.stderr)
        print(f"并行任务数: {cls.MAX_JOBS}", file=sys.stderr)
        print("================", file=sys.stderr)
