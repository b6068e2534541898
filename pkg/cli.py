"""
命令行入口 - 维数表、检验套件、矩阵导出

子命令：
  dims    打印每个 (t, p) 的 dim T_t^p、分拆个数与签名/多项式系数分解
  verify  运行所选检验，输出 JSON 报告；全部 PASS 时退出码为 0
  export  导出复形清单、微分矩阵文件与基列表
"""
import argparse
import concurrent.futures
import sys
import time
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from combinatorics import dim_T_formula, enumerate_compositions, enumerate_signatures, multinomial
from complexes import build_inverted_koszul, export_complex
from config import Config
from exact_linalg import FIELD_CODES, FieldSpec
from spectral import verify_spectral
from verify import (
    CheckOutcome,
    bar_comparison,
    equivariance_check,
    euler_identity,
    ext_check,
    hilbert_identity,
    koszul_exactness,
    square_zero,
    verify_exactness,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class RunConfig(BaseModel):
    """一次运行的参数；构造时校验范围与规模上限"""

    n: int = Field(ge=1)
    t_values: List[int] = Field(min_length=1)
    field: str = Field(default_factory=lambda: Config.DEFAULT_FIELD)
    checks: List[str] = Field(default_factory=list)
    seed: int = Field(default_factory=lambda: Config.DEFAULT_SEED)
    trials: int = Field(default_factory=lambda: Config.DEFAULT_TRIALS, ge=1)
    out: Optional[str] = None
    cap: int = Field(default_factory=lambda: Config.BASIS_CAP, ge=1)
    jobs: int = Field(default_factory=lambda: Config.MAX_JOBS, ge=1)

    @field_validator("t_values")
    @classmethod
    def _check_t(cls, values: List[int]) -> List[int]:
        bad = [t for t in values if t < 1]
        if bad:
            raise ValueError(f"t 必须 ≥ 1，当前为 {bad}")
        return values

    @field_validator("field")
    @classmethod
    def _check_field(cls, code: str) -> str:
        return FieldSpec.parse(code).code

    @field_validator("checks")
    @classmethod
    def _check_names(cls, names: List[str]) -> List[str]:
        unknown = [name for name in names if name not in Config.ALL_CHECKS]
        if unknown:
            raise ValueError(f"未知的检验项 {unknown}，可选: {', '.join(Config.ALL_CHECKS)}")
        # 去重并保持给定顺序
        return list(dict.fromkeys(names))

    @model_validator(mode="after")
    def _check_cap(self) -> "RunConfig":
        for t in self.t_values:
            total = sum(dim_T_formula(self.n, t, p) for p in range(1, t + 1))
            if total > self.cap:
                raise ValueError(
                    f"n={self.n}, t={t} 共有 {total} 个基元素，超过上限 {self.cap}（可用 --cap 调整）"
                )
        return self

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)


class CheckRecord(BaseModel):
    name: str
    params: Dict[str, Any]
    status: Literal["PASS", "FAIL"]
    details: str
    elapsed_ms: int


class VerifyReport(BaseModel):
    """verify 子命令的 JSON 报告"""

    n: int
    t_values: List[int]
    field: str
    seed: int
    checks: List[CheckRecord]
    tool_version: str

    @property
    def all_passed(self) -> bool:
        return all(record.status == "PASS" for record in self.checks)


@dataclass(frozen=True)
class CheckJob:
    """一个 (t, 检验项) 任务；可在子进程中独立执行"""

    name: str
    n: int
    t: int
    field: str
    seed: int
    trials: int
    debug: bool = False


def status(message: str):
    """状态信息写到 stderr，stdout 只留给报告和表格"""
    print(message, file=sys.stderr, flush=True)


def parse_t_range(text: str) -> List[int]:
    """
    解析 --t 参数

    Args:
        text: 单个整数 "4" 或闭区间 "2..5"

    Returns:
        t 的列表（升序）
    """
    text = text.strip()
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
            if low > high:
                raise ValueError(f"区间下界大于上界: {text}")
            return list(range(low, high + 1))
        return [int(text)]
    except ValueError as e:
        raise ValueError(f"无法解析 --t '{text}': {e}") from e


def parse_checks(text: Optional[str]) -> List[str]:
    if text is None:
        return list(Config.DEFAULT_CHECKS)
    if text.strip() == "all":
        return list(Config.ALL_CHECKS)
    return [name.strip() for name in text.split(",") if name.strip()]


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """把命令行参数转成 RunConfig，并写入 Config 覆盖值"""
    Config.override(
        BASIS_CAP=args.cap,
        DEFAULT_SEED=args.seed,
        DEFAULT_TRIALS=getattr(args, "trials", None),
        MAX_JOBS=getattr(args, "jobs", None),
        DEBUG=args.debug or None,
    )
    return RunConfig(
        n=args.n,
        t_values=parse_t_range(args.t),
        field=args.field if args.field is not None else Config.DEFAULT_FIELD,
        checks=parse_checks(getattr(args, "checks", None)),
        seed=Config.DEFAULT_SEED,
        trials=Config.DEFAULT_TRIALS,
        out=getattr(args, "out", None),
        cap=Config.BASIS_CAP,
        jobs=Config.MAX_JOBS,
    )


# ---- dims ----

def dims_rows(n: int, t: int) -> List[str]:
    """每个 p 一行：dim、分拆个数，以及按签名的 多项式系数 × (Π C(n,k)) 分解"""
    rows = []
    for p in range(1, t + 1):
        dim = dim_T_formula(n, t, p)
        count = len(enumerate_compositions(t, p, n))
        terms = []
        for sig in enumerate_signatures(t, p, n):
            factors = []
            for k, copies in enumerate(sig.counts, start=1):
                factors.extend([str(comb(n, k))] * copies)
            terms.append(f"{multinomial(sig)} × ({'·'.join(factors)})")
        row = f"p = {p}: dim {dim}"
        if terms:
            row += " = " + " + ".join(terms)
        rows.append(f"{row}  [compositions: {count}]")
    return rows


def cmd_dims(config: RunConfig) -> int:
    for t in config.t_values:
        print(f"t = {t} (n = {config.n})")
        for row in dims_rows(config.n, t):
            print(f"  {row}")
        print(f"  S^{t}: dim {comb(config.n + t - 1, t)}")
    return EXIT_OK


# ---- verify ----

def _trivial(name: str, job: CheckJob, reason: str) -> CheckOutcome:
    return CheckOutcome(name, {"n": job.n, "t": job.t, "field": job.field}, True, reason)


def check_calls(job: CheckJob) -> List[Callable[[], CheckOutcome]]:
    """检验项名 → 若干个待执行的检验"""
    field_spec = FieldSpec.parse(job.field)
    n, t = job.n, job.t
    if job.name == "square-zero":
        return [lambda: square_zero(n, t, field_spec)]
    elif job.name == "exactness":
        return [lambda: verify_exactness(n, t, field_spec)]
    elif job.name == "euler":
        return [lambda: euler_identity(n, t)]
    elif job.name == "hilbert":
        return [lambda: hilbert_identity(n, max(Config.HILBERT_TRUNCATION, t))]
    elif job.name == "equivariance":
        return [lambda: equivariance_check(n, t, job.trials, job.seed, field_spec)]
    elif job.name == "spectral":
        if t < 2:
            return [lambda: _trivial("spectral", job, "t = 1: single column, nothing to check"),
                    lambda: koszul_exactness(n, t, field_spec)]
        return [lambda: verify_spectral(n, t, field_spec), lambda: koszul_exactness(n, t, field_spec)]
    elif job.name == "bar":
        if t < 2:
            return [lambda: _trivial("bar", job, "t = 1: no differentials to compare")]
        return [lambda: bar_comparison(n, t, field_spec, seed=job.seed)]
    elif job.name == "ext":
        return [lambda: ext_check(n, t, field_spec)]
    raise ValueError(f"未知的检验项: {job.name}")


def run_job(job: CheckJob) -> List[CheckRecord]:
    """执行一个任务；检验内部的 ValueError 记为 FAIL"""
    if job.debug:
        Config.override(DEBUG=True)
    records = []
    for call in check_calls(job):
        start = time.perf_counter()
        try:
            outcome = call()
        except ValueError as e:
            outcome = CheckOutcome(job.name, {"n": job.n, "t": job.t, "field": job.field}, False, f"error: {e}")
        elapsed_ms = int((time.perf_counter() - start) * 1000)
        records.append(CheckRecord(
            name=outcome.name,
            params=outcome.params,
            status=outcome.status,
            details=outcome.details,
            elapsed_ms=elapsed_ms,
        ))
    return records


def plan_jobs(config: RunConfig) -> List[CheckJob]:
    return [
        CheckJob(name, config.n, t, config.field, config.seed, config.trials, Config.DEBUG)
        for t in config.t_values
        for name in config.checks
    ]


def run_jobs(jobs: Sequence[CheckJob], workers: int) -> List[CheckRecord]:
    """按任务顺序汇总结果，与完成顺序无关"""
    if workers <= 1 or len(jobs) <= 1:
        results = [run_job(job) for job in jobs]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_job, job) for job in jobs]
            results = [future.result() for future in futures]
    return [record for records in results for record in records]


def cmd_verify(config: RunConfig) -> int:
    jobs = plan_jobs(config)
    status(f"🔄 运行 {len(jobs)} 个检验任务 (n={config.n}, t={config.t_values}, field={config.field}, jobs={config.jobs})")
    records = run_jobs(jobs, config.jobs)
    report = VerifyReport(
        n=config.n,
        t_values=config.t_values,
        field=config.field,
        seed=config.seed,
        checks=records,
        tool_version=Config.TOOL_VERSION,
    )
    for record in records:
        icon = "✅" if record.status == "PASS" else "❌"
        status(f"{icon} {record.name} t={record.params.get('t', '-')}: {record.details} ({record.elapsed_ms} ms)")

    payload = report.model_dump_json(indent=2)
    if config.out:
        path = Path(config.out)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(payload + "\n", encoding="utf-8")
        except OSError as e:
            raise OSError(f"写入报告失败 {path}: {e}") from e
        status(f"💾 报告已保存到: {path}")
    else:
        print(payload)

    failed = sum(1 for record in records if record.status == "FAIL")
    status(f"📊 {len(records) - failed} PASS / {failed} FAIL")
    return EXIT_OK if report.all_passed else EXIT_FAIL


# ---- export ----

def cmd_export(config: RunConfig) -> int:
    root = Path(config.out or "export")
    for t in config.t_values:
        directory = root / f"n{config.n}_t{t}_{config.field}"
        written = export_complex(build_inverted_koszul(config.n, t, config.field_spec), directory)
        status(f"✅ t={t}: 写出 {len(written)} 个文件到 {directory}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "dims": cmd_dims,
    "verify": cmd_verify,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="向量空间维数 n ≥ 1")
    common.add_argument("--t", type=str, required=True, help="总次数：单个值 4 或区间 2..5")
    common.add_argument("--field", type=str, choices=sorted(FIELD_CODES), help="系数域 (默认: q)")
    common.add_argument("--seed", type=int, help="随机种子 (默认: 12345)")
    common.add_argument("--cap", type=int, help="基元素总数上限 Σ_p dim T_t^p (默认: 1000000)")
    common.add_argument("--debug", action="store_true", help="启用调试模式，打印各检验的中间结果")

    parser = argparse.ArgumentParser(
        description="反转 Koszul 复形的精确计算与检验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  # 打印维数表
  python cli.py dims --n 2 --t 4

  # 在 Q 上检验正合性与平方零
  python cli.py verify --n 3 --t 4 --field q --checks exactness,square-zero

  # 在 F_2 上做 bar 比较，报告写入文件
  python cli.py verify --n 2 --t 2 --field f2 --checks bar --out report.json

  # 导出矩阵与基
  python cli.py export --n 2 --t 2 --out export
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("dims", parents=[common], help="打印维数表")

    verify_parser = subparsers.add_parser("verify", parents=[common], help="运行检验套件")
    verify_parser.add_argument(
        "--checks",
        type=str,
        help=f"逗号分隔的检验项或 all，可选: {', '.join(Config.ALL_CHECKS)} (默认: square-zero,exactness,euler)"
    )
    verify_parser.add_argument("--trials", type=int, help="等变性检验的随机群元素个数 (默认: 20)")
    verify_parser.add_argument("--jobs", type=int, help="并行进程数 (默认: 1)")
    verify_parser.add_argument("--out", type=str, help="报告输出路径（可选，默认写到 stdout）")

    export_parser = subparsers.add_parser("export", parents=[common], help="导出矩阵与基列表")
    export_parser.add_argument("--out", type=str, default="export", help="输出目录 (默认: export)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        config = build_run_config(args)
    except (ValidationError, ValueError) as e:
        status(f"❌ 参数错误: {e}")
        return EXIT_USAGE

    if not Config.validate_config():
        return EXIT_USAGE
    if Config.DEBUG:
        Config.print_config()

    try:
        return COMMANDS[args.command](config)
    except OSError as e:
        status(f"❌ 文件操作失败: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
