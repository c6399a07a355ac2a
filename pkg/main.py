# ==========================================
# main.py - 콜모고로프 실험실 명령행 런처
# ==========================================

import argparse
import json
import logging
import sys
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

# 프로젝트 루트 경로 설정
PROJECT_ROOT = Path(__file__).parent.absolute()
sys.path.insert(0, str(PROJECT_ROOT))

from core import setup_logging as setup_core_logging  # noqa: E402
from core.complexity import (  # noqa: E402
    build_conditional_table, count_compressible, decide_halting_with_rn, dnc_construct,
    dnc_time_bounded_check, first_incompressible, halting_bound_check, load_or_build,
    measure_constants, minimal_decision_margin, save_table, stabilization_bound, table_to_frame,
    time_bounded_c,
)
from core.errors import KolmogorovLabError  # noqa: E402
from core.experiments import (  # noqa: E402
    build_random_axiom_strategy, fuzz_audit, independence_experiment, monte_carlo_audit,
)
from core.logic import SYNTACTIC, BACKENDS, FinitizedModel, format_derivation, parse_statement  # noqa: E402
from core.machine import (  # noqa: E402
    CONDITIONAL, PLAIN, PREFIX, LITERAL_OVERHEAD, halting_fingerprint,
    measure_machine_constant,
)
from core.strategy import (  # noqa: E402
    extract_deterministic, false_statement_probability, leaf_path_probability, load_tree,
    monte_carlo, prove_probability, save_tree, tree_depth, tree_size, validate_tree,
)
from core import sumcheck  # noqa: E402
from utils.bitstrings import parse_bits, render_bits  # noqa: E402
from utils.config_loader import ConfigLoader, machine_from_config  # noqa: E402
from utils.rationals import jsonify, parse_fraction, pow2_inverse  # noqa: E402
from utils.report_writer import REPORT_FORMAT_VERSION, render_report, write_report  # noqa: E402

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class KolmoLabLauncher:
    """명령 하나를 실행하고 리포트 dict 를 돌려주는 런처"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        overrides = {
            'table.N': args.N,
            'table.L': args.L,
            'table.T': args.T,
            'table.workers': args.workers,
            'seed': args.seed,
            'output.format': args.format,
        }
        self.config = ConfigLoader(args.config or str(PROJECT_ROOT / 'config.yaml')).load(overrides)
        self.setup_logging()
        self.logger = logging.getLogger(__name__)
        self.machine = machine_from_config(self.config, args.machine_file).with_variant(PLAIN)
        self._tables: Dict[Tuple, Any] = {}

    def setup_logging(self):
        """로깅 설정 (logs/ 파일 + stderr)"""
        level_name = 'DEBUG' if self.args.verbose else str(self.config['logging']['level']).upper()
        level = getattr(logging, level_name, logging.INFO)
        log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        try:
            log_dir = Path(self.config['logging']['dir'])
            log_dir.mkdir(parents=True, exist_ok=True)
            log_file = log_dir / f'kolmo_lab_{datetime.now().strftime("%Y%m%d")}.log'
            handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
        except OSError as e:
            print(f"⚠️ 로그 파일 설정 실패 (계속 진행): {e}", file=sys.stderr)
        logging.basicConfig(level=level, format=log_format, handlers=handlers)
        setup_core_logging(level)

    # ------------------------------------------
    # 표와 모형
    # ------------------------------------------

    def limits(self, needed_n: int = 0) -> Tuple[int, int, int]:
        table = self.config['table']
        N = max(int(table['N']), needed_n)
        L = max(int(table['L']), N + LITERAL_OVERHEAD)
        return N, L, int(table['T'])

    def table(self, kind: str = PLAIN, needed_n: int = 0):
        N, L, T = self.limits(needed_n)
        key = (kind, N, L, T)
        if key not in self._tables:
            table_config = self.config['table']
            self._tables[key] = load_or_build(
                kind, self.machine.with_variant(kind), N, L, T,
                workers=int(table_config['workers']),
                cache_dir=table_config.get('cache_dir'),
                work_ceiling=int(table_config['work_ceiling']))
        return self._tables[key]

    def model(self, needed_n: int = 0) -> FinitizedModel:
        return FinitizedModel(self.machine, plain=self.table(PLAIN, needed_n))

    @property
    def seed(self) -> int:
        return int(self.config['seed'])

    # ------------------------------------------
    # table / bound / string / count / dnc
    # ------------------------------------------

    def table_build(self) -> Dict:
        kind = self.args.kind
        table = self.table(kind)
        if self.args.save:
            save_table(table, self.args.save)
        defined = [e for e in table.entries.values() if e.value is not None]
        return {
            'command': 'table build',
            'kind': kind,
            'machine': self.machine.with_variant(kind).fingerprint(),
            'N': table.N, 'L': table.L, 'T': table.budget,
            'strings': len(table.entries),
            'defined': len(defined),
            'max_value': max((e.value for e in defined), default=None),
            'saved': str(self.args.save) if self.args.save else None,
        }

    def table_query(self) -> Dict:
        x = parse_bits(self.args.x)
        table = self.table(self.args.kind, len(x))
        entry = table.entry(x)
        report = {
            'command': 'table query',
            'kind': self.args.kind,
            'x': render_bits(x),
            'value': entry.value,
            'witness': render_bits(entry.witness) if entry.witness is not None else None,
            'stabilization_time': entry.stabilization_time,
            'staircase': [list(step) for step in entry.staircase],
        }
        if self.args.t is not None:
            report['time_bounded_value'] = time_bounded_c(table, x, self.args.t)
        return report

    def table_export(self) -> List[Dict]:
        frame = table_to_frame(self.table(self.args.kind))
        return [{k: (None if pd.isna(v) else v) for k, v in row.items()}
                for row in frame.to_dict("records")]

    def bound_bn(self) -> Dict:
        table = self.table(needed_n=self.args.n)
        return {'command': 'bound bn', 'n': self.args.n, 'B': stabilization_bound(table, self.args.n)}

    def bound_halt_check(self) -> Dict:
        table = self.table(needed_n=self.args.n)
        report = halting_bound_check(table, self.args.n, self.args.c)
        return {
            'command': 'bound halt-check',
            'N': report.N, 'B': report.B, 'margin': report.margin,
            'minimal_margin': report.minimal_margin,
            'violations': [{'program': p, 'steps': s} for p, s in report.violations],
            'programs_scanned': report.programs_scanned,
            'ok': not report.violations,
        }

    def string_rn(self) -> Dict:
        table = self.table(needed_n=self.args.n)
        r_n = first_incompressible(table, self.args.n, self.args.deficiency)
        report = {
            'command': 'string rn',
            'n': self.args.n,
            'deficiency': self.args.deficiency,
            'r_n': render_bits(r_n),
            'value': table.value(r_n),
        }
        if self.args.decide:
            c = self.args.c if self.args.c is not None else minimal_decision_margin(table, self.args.n)
            decision = decide_halting_with_rn(table, self.args.n, c)
            report.update({
                'margin': c,
                'decision_time': decision.decision_time,
                'programs_checked': decision.programs_checked,
                'errors': decision.errors,
            })
        return report

    def count_compressible(self) -> Dict:
        n, c = self.args.n, self.args.c
        count = count_compressible(self.table(needed_n=n), n, c)
        bound = 2 ** (n - c)
        return {'command': 'count compressible', 'n': n, 'c': c, 'count': count,
                'bound': bound, 'ok': count < bound}

    def dnc(self) -> Dict:
        n, c = self.args.n, self.args.c
        T = self.limits()[2]
        result = dnc_construct(self.machine, n, c, T)
        report = {
            'command': 'dnc', 'n': n, 'c': c,
            'x': render_bits(result.string),
            'length': len(result.string),
            'terms': [render_bits(t) for t in result.terms],
            'verified_by': result.verified_by,
        }
        if self.args.time_bounded:
            check = dnc_time_bounded_check(self.machine, n, c, T)
            report['time_bounded'] = {
                'stabilized_time': check['stabilized_time'],
                'x': render_bits(check['time_bounded']),
                'equal': check['equal'],
            }
        return report

    # ------------------------------------------
    # strategy / axioms / experiment
    # ------------------------------------------

    def _target(self):
        if not getattr(self.args, "target", None):
            raise ValueError("--target 명제가 필요합니다")
        return parse_statement(self.args.target)

    def _tree(self):
        model = self.model()
        return load_tree(self.args.tree, model), model

    def strategy_validate(self) -> Dict:
        tree, model = self._tree()
        report = validate_tree(tree, self.args.backend, model)
        return {'command': 'strategy validate', 'backend': self.args.backend, 'ok': report.ok,
                'violations': report.violations, 'epsilon': tree.epsilon,
                'depth': tree_depth(tree), 'size': tree_size(tree)}

    def strategy_eval(self) -> Dict:
        tree, model = self._tree()
        target = self._target()
        result = prove_probability(tree, target, self.args.backend, model)
        report = result.to_dict()
        report.update({
            'command': 'strategy eval',
            'epsilon': tree.epsilon,
            'path_enumeration_agrees': leaf_path_probability(tree, target, self.args.backend, model)
            == result.probability,
            'false_statement_probability': false_statement_probability(tree, model),
        })
        return report

    def strategy_mc(self) -> Dict:
        trials = self.args.trials or int(self.config['strategy']['mc_trials'])
        if not self.args.tree:
            count = self.args.count or int(self.config['strategy']['mc_trees'])
            report = monte_carlo_audit(self.model(), count, trials, self.seed)
            report['command'] = 'strategy mc'
            return report
        tree, model = self._tree()
        target = self._target()
        result = monte_carlo(tree, target, trials, self.seed, self.args.backend, model)
        report = result.to_dict()
        report['command'] = 'strategy mc'
        report['exact'] = prove_probability(tree, target, self.args.backend, model).probability
        return report

    def strategy_extract(self) -> Dict:
        tree, model = self._tree()
        target = self._target()
        result = extract_deterministic(tree, target, self.args.backend, model)
        return {
            'command': 'strategy extract',
            'status': result.status,
            'probability': result.probability,
            'epsilon': result.epsilon,
            'derivation_size': len(result.derivation) if result.derived else None,
            'derivation': format_derivation(result.derivation).splitlines() if result.derived else [],
        }

    def strategy_fuzz(self) -> Dict:
        strategy = self.config['strategy']
        count = self.args.count or int(strategy['fuzz_count'])
        adversarial = self.args.adversarial if self.args.adversarial is not None else int(strategy['adversarial'])
        epsilons = [parse_fraction(str(e)) for e in strategy['epsilons']]
        report = fuzz_audit(self.model(), count, self.seed, epsilons, adversarial)
        report['command'] = 'strategy fuzz'
        return report

    def axioms_random(self) -> Dict:
        lengths = self.args.n if len(self.args.n) > 1 else self.args.n[0]
        needed = max(self.args.n)
        model = self.model(needed)
        epsilon = parse_fraction(self.args.epsilon)
        tree = build_random_axiom_strategy(model, lengths, self.args.c, epsilon)
        if self.args.save:
            save_tree(tree, self.args.save)
        return {
            'command': 'axioms random',
            'epsilon': epsilon,
            'spent': sum((pow2_inverse(c) for c in self.args.c), Fraction(0)),
            'valid': validate_tree(tree, SYNTACTIC, model).ok,
            'false_statement_probability': false_statement_probability(tree, model),
            'depth': tree_depth(tree),
            'size': tree_size(tree),
            'saved': str(self.args.save) if self.args.save else None,
        }

    def experiment_independence(self) -> Dict:
        model = self.model(self.args.n)
        report = independence_experiment(model, self.args.m, self.args.n, self.args.c,
                                         self.args.trials, self.seed)
        result = report.to_dict()
        result['command'] = 'experiment independence'
        return result

    # ------------------------------------------
    # sumcheck
    # ------------------------------------------

    def _qbf(self):
        return sumcheck.parse_qbf(self.args.qbf, int(self.config['sumcheck']['max_vars']))

    def sumcheck_compile(self) -> Dict:
        qbf = self._qbf()
        compiled = sumcheck.compile_honest_strategy(
            qbf, self.args.p, int(self.config['sumcheck']['tree_ceiling']))
        if self.args.save:
            save_tree(compiled.tree, self.args.save)
        result = prove_probability(compiled.tree, compiled.target)
        return {
            'command': 'sumcheck compile',
            'qbf': sumcheck.format_qbf(qbf),
            'p': compiled.arith.p,
            'rounds': compiled.arith.rounds,
            'degrees': compiled.arith.degrees,
            'epsilon': compiled.epsilon,
            'probability': result.probability,
            'valid': validate_tree(compiled.tree).ok,
            'depth': tree_depth(compiled.tree),
            'size': tree_size(compiled.tree),
            'saved': str(self.args.save) if self.args.save else None,
        }

    def sumcheck_accept(self) -> Dict:
        qbf = self._qbf()
        arith = sumcheck.arithmetize(qbf, self.args.p)
        ceiling = int(self.config['sumcheck']['work_ceiling'])
        return {
            'command': 'sumcheck accept',
            'qbf': sumcheck.format_qbf(qbf),
            'true': sumcheck.evaluate_qbf(qbf),
            'p': arith.p,
            'rounds': arith.rounds,
            'degree_bound': arith.degree_bound,
            'capital': arith.capital,
            'honest_acceptance': sumcheck.honest_acceptance(qbf, arith.p, ceiling),
            'max_adversarial_acceptance': sumcheck.max_adversarial_acceptance(qbf, arith.p, ceiling),
        }

    def sumcheck_transcript(self) -> Dict:
        qbf = self._qbf()
        transcript = sumcheck.run_protocol(qbf, self.args.p, self.seed,
                                           int(self.config['sumcheck']['work_ceiling']))
        result = transcript.to_dict()
        result['command'] = 'sumcheck transcript'
        return result

    def sumcheck_suite(self) -> Dict:
        ceiling = int(self.config['sumcheck']['work_ceiling'])
        report = sumcheck.suite_report(self.seed, ceiling)
        report['command'] = 'sumcheck suite'
        if self.args.growth:
            qbfs = [sumcheck.parse_qbf(row['qbf']) for row in report['rows']]
            report['growth'] = sumcheck.derivation_growth_report(
                qbfs, int(self.config['sumcheck']['tree_ceiling']))
        return report

    # ------------------------------------------
    # machine / constants
    # ------------------------------------------

    def machine_fingerprint(self) -> Dict:
        T = self.limits()[2]
        return {
            'command': 'machine fingerprint',
            'config': self.machine.fingerprint(),
            'max_len': self.args.max_len,
            'budget': T,
            'halting': halting_fingerprint(self.machine, self.args.max_len, T),
        }

    def constants(self) -> Dict:
        plain = self.table(PLAIN)
        N, L, T = self.limits()
        prefix = self.table(PREFIX)
        conditionals = [build_conditional_table(self.machine.with_variant(CONDITIONAL), parse_bits(y),
                                                N, L, T, workers=int(self.config['table']['workers']))
                        for y in self.args.conditions]
        measured = measure_constants(plain, prefix, conditionals)
        measured['c_mach_direct'] = measure_machine_constant(self.machine, N, T)
        measured['command'] = 'constants'
        measured['N'], measured['L'], measured['T'] = N, L, T
        return measured


COMMANDS = {
    ('table', 'build'): KolmoLabLauncher.table_build,
    ('table', 'query'): KolmoLabLauncher.table_query,
    ('table', 'export'): KolmoLabLauncher.table_export,
    ('bound', 'bn'): KolmoLabLauncher.bound_bn,
    ('bound', 'halt-check'): KolmoLabLauncher.bound_halt_check,
    ('string', 'rn'): KolmoLabLauncher.string_rn,
    ('count', 'compressible'): KolmoLabLauncher.count_compressible,
    ('dnc', None): KolmoLabLauncher.dnc,
    ('strategy', 'validate'): KolmoLabLauncher.strategy_validate,
    ('strategy', 'eval'): KolmoLabLauncher.strategy_eval,
    ('strategy', 'mc'): KolmoLabLauncher.strategy_mc,
    ('strategy', 'extract'): KolmoLabLauncher.strategy_extract,
    ('strategy', 'fuzz'): KolmoLabLauncher.strategy_fuzz,
    ('axioms', 'random'): KolmoLabLauncher.axioms_random,
    ('experiment', 'independence'): KolmoLabLauncher.experiment_independence,
    ('sumcheck', 'compile'): KolmoLabLauncher.sumcheck_compile,
    ('sumcheck', 'accept'): KolmoLabLauncher.sumcheck_accept,
    ('sumcheck', 'transcript'): KolmoLabLauncher.sumcheck_transcript,
    ('sumcheck', 'suite'): KolmoLabLauncher.sumcheck_suite,
    ('machine', 'fingerprint'): KolmoLabLauncher.machine_fingerprint,
    ('constants', None): KolmoLabLauncher.constants,
}


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='설정 파일 (YAML 또는 key = value 기계 설정)')
    common.add_argument('--machine-file', help='기계 설정 파일 (key = value)')
    common.add_argument('--N', type=int, help='표의 문자열 최대 길이')
    common.add_argument('--L', type=int, help='표의 프로그램 최대 길이')
    common.add_argument('--T', type=int, help='실행 예산 T∞')
    common.add_argument('--workers', type=int, help='표 생성 작업자 수')
    common.add_argument('--seed', type=int, help='난수 시드')
    common.add_argument('--format', choices=['json', 'csv'], help='리포트 형식')
    common.add_argument('--output', help='리포트 파일 (없으면 표준 출력)')
    common.add_argument('--verbose', action='store_true', help='DEBUG 로그')
    return common


def create_parser():
    """명령행 인수 파서 생성"""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        description="토이 범용 기계 콜모고로프 실험실",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
사용 예시:
  python main.py count compressible --n 6 --c 2
  python main.py bound halt-check --n 6 --c 2
  python main.py strategy fuzz --count 500 --seed 7
  python main.py sumcheck accept --qbf forall_x.x --p 17
        """
    )
    groups = parser.add_subparsers(dest='command', required=True, help='실행할 명령')

    def leaf(subparsers, name, help_text):
        return subparsers.add_parser(name, parents=[common], help=help_text)

    def group(name, help_text):
        sub = groups.add_parser(name, help=help_text).add_subparsers(dest='action', required=True)
        return sub

    # table
    table = group('table', '복잡도 표')
    for action, help_text in (('build', '표 생성'), ('query', '문자열 조회'), ('export', '표 내보내기')):
        p = leaf(table, action, help_text)
        p.add_argument('--kind', choices=[PLAIN, PREFIX], default=PLAIN, help='표 종류')
        if action == 'build':
            p.add_argument('--save', help='표 파일 저장 경로')
        if action == 'query':
            p.add_argument('--x', required=True, help="비트열 ('-' 는 빈 문자열)")
            p.add_argument('--t', type=int, help='시간 제한 복잡도 C^t')

    # bound
    bound = group('bound', '정지 한계')
    p = leaf(bound, 'bn', 'B(n) 계산')
    p.add_argument('--n', type=int, required=True)
    p = leaf(bound, 'halt-check', '길이 <= n-c 프로그램의 B(n) 안 정지 검사')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--c', type=int, required=True)

    # string
    string = group('string', '특정 문자열')
    p = leaf(string, 'rn', '사전식 첫 비압축 문자열 r_n')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--deficiency', type=int, default=0)
    p.add_argument('--decide', action='store_true', help='r_n 으로 정지 판정 검사')
    p.add_argument('--c', type=int, help='판정 margin (없으면 최소값 측정)')

    # count
    count = group('count', '계수')
    p = leaf(count, 'compressible', '|{x : |x|=n, C(x) < n-c}|')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--c', type=int, required=True)

    # dnc
    p = groups.add_parser('dnc', parents=[common], help='대각화로 복잡한 문자열 계산')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--c', type=int, required=True)
    p.add_argument('--time-bounded', action='store_true', help='C^t 오라클과 비교')

    # strategy
    strategy = group('strategy', '확률적 전략 트리')
    for action, help_text in (('validate', '트리 검증'), ('eval', '증명 확률'),
                              ('mc', '몬테카를로 추정'), ('extract', '결정적 유도 추출')):
        p = leaf(strategy, action, help_text)
        p.add_argument('--tree', required=action != 'mc', help='전략 트리 파일')
        p.add_argument('--backend', choices=list(BACKENDS), default=SYNTACTIC)
        if action != 'validate':
            p.add_argument('--target', required=action != 'mc', help='목표 명제 (S-식)')
        if action == 'mc':
            p.add_argument('--trials', type=int)
            p.add_argument('--count', type=int, help='--tree 없이 감사할 트리 수')
    p = leaf(strategy, 'fuzz', '퍼즈 감사 (건전성 + 보존)')
    p.add_argument('--count', type=int)
    p.add_argument('--adversarial', type=int)

    # axioms
    axioms = group('axioms', '무작위 공리 전략')
    p = leaf(axioms, 'random', '"C(x) >= n - c" 무작위 추가 전략')
    p.add_argument('--n', type=int, nargs='+', required=True, help='길이 (하나 또는 단계별)')
    p.add_argument('--c', type=int, nargs='+', required=True, help='단계별 c_i')
    p.add_argument('--epsilon', required=True, help='자본 (num/den)')
    p.add_argument('--save', help='트리 파일 저장 경로')

    # experiment
    experiment = group('experiment', '실험')
    p = leaf(experiment, 'independence', '무작위 문장 독립성')
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--c', type=int, required=True)
    p.add_argument('--trials', type=int, default=200)

    # sumcheck
    check = group('sumcheck', 'QBF 합검사 프로토콜')
    for action, help_text in (('compile', '정직한 전략 트리 컴파일'), ('accept', '수용 확률'),
                              ('transcript', '프로토콜 한 번 실행')):
        p = leaf(check, action, help_text)
        p.add_argument('--qbf', required=True, help='QBF (예: "forall x exists y (x | y)")')
        p.add_argument('--p', type=int, help='소수 (p > 2D)')
        if action == 'compile':
            p.add_argument('--save', help='트리 파일 저장 경로')
    p = leaf(check, 'suite', '참/거짓 QBF 묶음 검사')
    p.add_argument('--growth', action='store_true', help='유도 크기 성장 리포트 포함')

    # machine / constants
    machine = group('machine', '기계')
    p = leaf(machine, 'fingerprint', '설정/정지 지문')
    p.add_argument('--max-len', type=int, default=8)
    p = groups.add_parser('constants', parents=[common], help='기계 상수 측정')
    p.add_argument('--conditions', nargs='*', default=['0', '1'], help='c_lift 측정용 조건들')

    return parser


def emit(result: Any, args: argparse.Namespace, fmt: str) -> None:
    if isinstance(result, dict):
        result = {'format': REPORT_FORMAT_VERSION, **result}
    if args.output:
        write_report(result, args.output, fmt)
    else:
        sys.stdout.write(render_report(result, fmt).decode('utf-8'))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """메인 함수: 종료 코드 0 (성공) / 1 (도메인 오류) / 2 (사용법 오류)"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK

    try:
        launcher = KolmoLabLauncher(args)
        handler = COMMANDS[(args.command, getattr(args, 'action', None))]
        result = handler(launcher)
        emit(result, args, launcher.config['output']['format'])
        return EXIT_OK
    except KolmogorovLabError as e:
        sys.stderr.write(json.dumps(jsonify(e.to_dict()), ensure_ascii=False, default=str) + '\n')
        return EXIT_DOMAIN
    except (ValueError, FileNotFoundError) as e:
        sys.stderr.write(json.dumps({'error': type(e).__name__, 'message': str(e), 'payload': {}},
                                    ensure_ascii=False) + '\n')
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
