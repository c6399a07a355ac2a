# ==========================================
# core/complexity.py - 복잡도 표, 시간 제한 복잡도, 정지 한계
# ==========================================

import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from core.errors import (
    InfeasibleBudgetError, InternalConsistencyError, NoIncompressibleStringError,
    OracleContradictionError, PreconditionError,
)
from core.machine import (
    CONDITIONAL, LITERAL_OVERHEAD, PLAIN, PREFIX, UNIV_PROGRAM, MachineConfig,
    enumerate_programs, kraft_sum, run,
)
from utils.bitstrings import (
    EMPTY, count_strings, encode_sequence, index_to_string, iter_strings,
    length_lex_key, pair_strings, parse_bits, render_bits, strings_of_length,
)

logger = logging.getLogger(__name__)

TABLE_FORMAT_VERSION = 'kolmo-table v1'
DEFAULT_WORK_CEILING = 2 * 10 ** 9

# 출력 문자열 -> {프로그램 길이: (최소 단계 수, 최소 프로그램 번호)}
_Partial = Dict[str, Dict[int, Tuple[int, int]]]


@dataclass(frozen=True)
class TableEntry:
    """문자열 하나에 대한 표 항목"""
    string: str
    value: Optional[int]
    witness: Optional[str]
    stabilization_time: Optional[int]
    # (길이, 그 길이에서의 최소 단계) - 길이 증가, 단계 감소
    staircase: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True)
class ComplexityTable:
    """전수 열거로 얻은 정확한 복잡도 표"""
    machine: MachineConfig
    max_string_len: int
    max_prog_len: int
    budget: int
    entries: Dict[str, TableEntry] = field(hash=False)
    variant_tag: str = PLAIN
    condition: str = EMPTY

    @property
    def N(self) -> int:
        return self.max_string_len

    @property
    def L(self) -> int:
        return self.max_prog_len

    def entry(self, x: str) -> TableEntry:
        if len(x) > self.max_string_len:
            raise PreconditionError(f"|x|={len(x)} 가 표 한도 N={self.max_string_len} 를 넘습니다")
        return self.entries[x]

    def value(self, x: str) -> Optional[int]:
        return self.entry(x).value

    def strings(self) -> List[str]:
        return sorted(self.entries, key=length_lex_key)

    def describe(self) -> str:
        return (f"{self.variant_tag} N={self.max_string_len} L={self.max_prog_len} "
                f"T={self.budget}")


@dataclass
class BoundReport:
    """B(N) 정지 한계 검사 결과"""
    N: int
    B: int
    margin: int
    violations: List[Tuple[str, int]]
    minimal_margin: int
    programs_scanned: int
    cross_check_ok: bool = True


@dataclass
class HaltingDecisionReport:
    """r_n 을 이용한 유한화 정지 판정 결과"""
    n: int
    r_n: str
    decision_time: int
    margin: int
    programs_checked: int
    errors: List[str]


@dataclass
class DncResult:
    """조건부 복잡도 오라클로 만든 복잡한 문자열"""
    string: str
    n: int
    c: int
    terms: List[str]
    verified_by: str


def _check_precondition(machine: MachineConfig, N: int, L: int, T: int, work_ceiling: int):
    if N < 0 or L < 0:
        raise ValueError("N, L 은 0 이상이어야 합니다")
    if T > machine.max_steps_hard:
        raise PreconditionError(f"T={T} 가 max_steps_hard={machine.max_steps_hard} 를 초과합니다")
    work = count_strings(L) * T
    if work > work_ceiling:
        raise InfeasibleBudgetError(
            f"작업량 {work} 가 한도 {work_ceiling} 를 초과합니다",
            {'work': work, 'ceiling': work_ceiling, 'L': L, 'T': T},
        )


class TableBuilder:
    """프로그램 공간을 나누어 스캔하고 최소값으로 병합"""

    def __init__(self, machine: MachineConfig, workers: int = 1,
                 work_ceiling: int = DEFAULT_WORK_CEILING):
        self.machine = machine
        self.workers = max(1, int(workers))
        self.work_ceiling = work_ceiling
        self.logger = logging.getLogger(__name__)

    def _scan(self, start: int, stop: int, N: int, T: int, condition: str) -> _Partial:
        partial: _Partial = {}
        demand_driven = self.machine.variant == PREFIX
        for index in range(start, stop):
            bits = index_to_string(index)
            result = run(self.machine, bits, T, condition)
            if not result.halted or len(result.output) > N:
                continue
            if demand_driven and result.bits_consumed != len(bits):
                continue
            per_length = partial.setdefault(result.output, {})
            best = per_length.get(len(bits))
            if best is None:
                per_length[len(bits)] = (result.steps, index)
            else:
                per_length[len(bits)] = (min(best[0], result.steps), min(best[1], index))
        return partial

    @staticmethod
    def _merge(acc: _Partial, part: _Partial):
        for x, per_length in part.items():
            target = acc.setdefault(x, {})
            for length, (steps, index) in per_length.items():
                if length in target:
                    old_steps, old_index = target[length]
                    target[length] = (min(old_steps, steps), min(old_index, index))
                else:
                    target[length] = (steps, index)

    @staticmethod
    def _entry(x: str, per_length: Dict[int, Tuple[int, int]]) -> TableEntry:
        if not per_length:
            return TableEntry(x, None, None, None, ())
        lengths = sorted(per_length)
        value = lengths[0]
        steps, index = per_length[value]
        staircase = []
        best_steps = None
        for length in lengths:
            length_steps = per_length[length][0]
            if best_steps is None or length_steps < best_steps:
                staircase.append((length, length_steps))
                best_steps = length_steps
        return TableEntry(x, value, index_to_string(index), steps, tuple(staircase))

    def build(self, N: int, L: int, T: int, condition: str = EMPTY,
              variant_tag: Optional[str] = None) -> ComplexityTable:
        _check_precondition(self.machine, N, L, T, self.work_ceiling)
        total = count_strings(L)
        chunk_count = max(1, self.workers * 4)
        bounds = [total * i // chunk_count for i in range(chunk_count + 1)]

        self.logger.info(f"📊 표 생성 시작: {self.machine.variant} N={N} L={L} T={T} "
                         f"({total}개 프로그램, {self.workers}개 워커)")
        merged: _Partial = {}
        if self.workers == 1:
            for start, stop in zip(bounds, bounds[1:]):
                self._merge(merged, self._scan(start, stop, N, T, condition))
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                futures = [executor.submit(self._scan, start, stop, N, T, condition)
                           for start, stop in zip(bounds, bounds[1:])]
                for future in as_completed(futures):
                    self._merge(merged, future.result())

        entries = {x: self._entry(x, merged.get(x, {})) for x in iter_strings(N)}
        tag = variant_tag or self.machine.variant
        table = ComplexityTable(self.machine, N, L, T, entries, tag, condition)
        undefined = sum(1 for e in entries.values() if e.value is None)
        if undefined:
            self.logger.warning(f"⚠️ 값이 정의되지 않은 문자열 {undefined}개 (L 부족)")
        self.logger.info(f"✅ 표 생성 완료: {table.describe()}")
        return table


def build_table(machine: MachineConfig, N: int, L: int, T: int, workers: int = 1,
                work_ceiling: int = DEFAULT_WORK_CEILING) -> ComplexityTable:
    """평문 복잡도 표 C(x)"""
    if machine.variant != PLAIN:
        raise ValueError("build_table 은 plain 기계용입니다")
    if L < N + LITERAL_OVERHEAD:
        raise PreconditionError(f"L={L} 는 N + c_mach = {N + LITERAL_OVERHEAD} 이상이어야 합니다",
                                {'N': N, 'L': L, 'c_mach': LITERAL_OVERHEAD})
    return TableBuilder(machine, workers, work_ceiling).build(N, L, T)


def prefix_table(machine: MachineConfig, N: int, L: int, T: int, workers: int = 1,
                 work_ceiling: int = DEFAULT_WORK_CEILING) -> ComplexityTable:
    """접두 복잡도 표 K(x)"""
    if machine.variant != PREFIX:
        raise ValueError("prefix_table 은 prefix 기계용입니다")
    table = TableBuilder(machine, workers, work_ceiling).build(N, L, T)
    total = kraft_sum(e.value for e in table.entries.values() if e.value is not None)
    if total > 1:
        raise InternalConsistencyError(f"Kraft 합 {total} > 1", {'kraft_sum': str(total)})
    return table


def build_conditional_table(machine: MachineConfig, condition: str, N: int, L: int, T: int,
                            workers: int = 1,
                            work_ceiling: int = DEFAULT_WORK_CEILING) -> ComplexityTable:
    """조건 y 에 대한 조건부 복잡도 표 C(x|y)"""
    if machine.variant != CONDITIONAL:
        raise ValueError("build_conditional_table 은 conditional 기계용입니다")
    tag = f"conditional({render_bits(condition)})"
    return TableBuilder(machine, workers, work_ceiling).build(N, L, T, condition, tag)


def kraft_total(table: ComplexityTable) -> Fraction:
    return kraft_sum(e.value for e in table.entries.values() if e.value is not None)


def direct_value(machine: MachineConfig, x: str, L: int, T: int,
                 condition: str = EMPTY) -> Optional[int]:
    """표와 무관한 직접 스캔 (검증용)"""
    for length in range(L + 1):
        for bits in strings_of_length(length):
            result = run(machine, bits, T, condition)
            if not result.halted or result.output != x:
                continue
            if machine.variant == PREFIX and result.bits_consumed != length:
                continue
            return length
    return None


def time_bounded_c(table: ComplexityTable, x: str, t: int) -> Optional[int]:
    """C^t(x): t 단계 안에 x 를 출력하는 최단 프로그램 길이"""
    if t > table.budget:
        raise PreconditionError(f"t={t} 가 표의 T={table.budget} 를 초과합니다",
                                {'t': t, 'T': table.budget})
    for length, steps in table.entry(x).staircase:
        if steps <= t:
            return length
    return None


def stabilization_bound(table: ComplexityTable, n: int) -> int:
    """B(n) = max_{|x|<=n} stabilization_time(x)"""
    if n > table.max_string_len:
        raise PreconditionError(f"n={n} 이 표 한도 N={table.max_string_len} 를 넘습니다")
    times = [e.stabilization_time for e in table.entries.values()
             if len(e.string) <= n and e.stabilization_time is not None]
    return max(times) if times else 0


def _halting_steps_by_length(table: ComplexityTable, max_len: int) -> Dict[int, List[Tuple[str, int, str]]]:
    found: Dict[int, List[Tuple[str, int, str]]] = {}
    for program in enumerate_programs(max(max_len, 0)):
        result = run(table.machine, program, table.budget)
        if result.halted:
            found.setdefault(program.length, []).append((program.bits, result.steps, result.output))
    return found


def halting_bound_check(table: ComplexityTable, n: int, c: int) -> BoundReport:
    """길이 <= n - c 의 정지 프로그램이 모두 B(n) 안에 멈추는지 전수 검사"""
    if c < 0:
        raise ValueError("margin c 는 0 이상이어야 합니다")
    bound = stabilization_bound(table, n)
    halting = _halting_steps_by_length(table, n)

    bad_lengths = [length for length, runs in halting.items()
                   if any(steps > bound for _, steps, _ in runs)]
    minimal_margin = n - min(bad_lengths) + 1 if bad_lengths else 0

    violations: List[Tuple[str, int]] = []
    scanned = 0
    mismatched: List[str] = []
    if n - c >= 0:
        for length in range(n - c + 1):
            scanned += 2 ** length
            for bits, steps, output in halting.get(length, []):
                if steps <= bound:
                    continue
                violations.append((bits, steps))
                # 재실행: B(n) 예산으로는 멈추지 않고 steps 예산으로는 같은 출력
                within_bound = run(table.machine, bits, bound)
                exact = run(table.machine, bits, min(steps, table.budget))
                if within_bound.halted or not exact.halted or exact.output != output:
                    mismatched.append(bits)
    cross_check_ok = not mismatched
    if not cross_check_ok:
        raise InternalConsistencyError("정지 한계 위반이 재실행과 일치하지 않습니다",
                                       {'violations': violations, 'mismatched': mismatched})
    return BoundReport(n, bound, c, violations, minimal_margin, scanned, cross_check_ok)


def first_incompressible(table: ComplexityTable, n: int, deficiency: int = 0) -> str:
    """r_n: C(x) >= n - deficiency 인 사전식 첫 길이-n 문자열"""
    if n > table.max_string_len:
        raise PreconditionError(f"n={n} 이 표 한도 N={table.max_string_len} 를 넘습니다")
    threshold = n - deficiency
    for x in strings_of_length(n):
        value = table.value(x)
        if value is None or value >= threshold:
            return x
    raise NoIncompressibleStringError(
        f"길이 {n} 인 비압축 문자열이 없습니다", {'n': n, 'deficiency': deficiency})


def count_compressible(table: ComplexityTable, n: int, c: int) -> int:
    """|{x : |x| = n, C(x) < n - c}|"""
    if not 0 <= c <= n:
        raise ValueError(f"0 <= c <= n 이어야 합니다 (n={n}, c={c})")
    if n > table.max_string_len:
        raise PreconditionError(f"n={n} 이 표 한도 N={table.max_string_len} 를 넘습니다")
    return sum(1 for x in strings_of_length(n)
               if table.value(x) is not None and table.value(x) < n - c)


def conditional_complexity(table_cond: ComplexityTable, x: str, y: str) -> Optional[int]:
    if table_cond.condition != y or not table_cond.variant_tag.startswith(CONDITIONAL):
        raise ValueError(f"조건 {render_bits(y)} 용 조건부 표가 아닙니다")
    return table_cond.value(x)


def first_string_at_least(table: ComplexityTable, k: int) -> Optional[str]:
    """C(x) >= k 인 길이-사전식 첫 문자열 (버리 역설 탐색의 유한판)"""
    for x in table.strings():
        value = table.value(x)
        if value is None or value >= k:
            return x
    return None


def _least_time_below(entry: TableEntry, n: int) -> Optional[int]:
    times = [steps for length, steps in entry.staircase if length < n]
    return min(times) if times else None


def decide_halting_with_rn(table: ComplexityTable, n: int, c: int) -> HaltingDecisionReport:
    """r_n 으로 정한 시간 안에 길이 <= n - c 프로그램의 정지 여부를 판정하고 실제와 비교"""
    r_n = first_incompressible(table, n)
    decision_time = 0
    for y in strings_of_length(n):
        if y == r_n:
            break
        t_y = _least_time_below(table.entry(y), n)
        if t_y is None:
            raise InternalConsistencyError(f"{y} 는 r_n 앞인데 압축되지 않습니다")
        decision_time = max(decision_time, t_y)

    errors = []
    checked = 0
    for program in enumerate_programs(n - c) if n - c >= 0 else []:
        checked += 1
        predicted = run(table.machine, program, min(decision_time, table.budget)).halted
        actual = run(table.machine, program, table.budget).halted
        if predicted != actual:
            errors.append(program.bits)
    return HaltingDecisionReport(n, r_n, decision_time, c, checked, errors)


def minimal_decision_margin(table: ComplexityTable, n: int) -> int:
    for c in range(n + 2):
        if not decide_halting_with_rn(table, n, c).errors:
            return c
    return n + 1


def measure_constants(plain: ComplexityTable, prefix: Optional[ComplexityTable] = None,
                      conditionals: Optional[List[ComplexityTable]] = None) -> Dict[str, Optional[int]]:
    """기계 상수 c_mach, c_pk, c_lift 측정"""
    c_mach = max((e.value - len(e.string) for e in plain.entries.values() if e.value is not None),
                 default=None)
    c_pk = None
    if prefix is not None:
        gaps = [plain.value(x) - prefix.value(x) for x in prefix.entries
                if len(x) <= plain.max_string_len
                and prefix.value(x) is not None and plain.value(x) is not None]
        c_pk = max(gaps, default=None)
    c_lift = None
    if conditionals:
        gaps = []
        for cond in conditionals:
            for x, e in cond.entries.items():
                if e.value is not None and len(x) <= plain.max_string_len and plain.value(x) is not None:
                    gaps.append(e.value - plain.value(x))
        c_lift = max(gaps, default=None)
    return {'c_mach': c_mach, 'c_pk': c_pk, 'c_lift': c_lift}


class ConditionalOracle:
    """(u, q) -> C(y | ⟨u,q⟩) > c 인 길이-사전식 첫 y"""

    def __init__(self, machine: MachineConfig, c: int, budget: int):
        if machine.variant != CONDITIONAL:
            raise ValueError("오라클은 conditional 기계가 필요합니다")
        self.machine = machine
        self.c = c
        self.budget = budget
        self.max_halting_steps = 0

    def short_outputs(self, u: int, q: str) -> set:
        condition = pair_strings(u, q)
        outputs = set()
        for program in enumerate_programs(self.c):
            result = run(self.machine, program, self.budget, condition)
            if result.halted:
                outputs.add(result.output)
                self.max_halting_steps = max(self.max_halting_steps, result.steps)
        return outputs

    def __call__(self, u: int, q: str) -> str:
        outputs = self.short_outputs(u, q)
        index = 0
        while index_to_string(index) in outputs:
            index += 1
        return index_to_string(index)


def time_bounded_oracle(machine: MachineConfig, c: int, t: int) -> ConditionalOracle:
    """C 대신 C^t 를 쓰는 오라클"""
    return ConditionalOracle(machine, c, t)


def dnc_construct(machine: MachineConfig, n: int, c: int, T: int,
                  oracle: Optional[Callable[[int, str], str]] = None,
                  plain_table: Optional[ComplexityTable] = None) -> DncResult:
    """길이 <= n 인 모든 프로그램에 대각화하여 C(x) >= n 인 x 를 계산"""
    if machine.variant != PLAIN:
        raise ValueError("dnc_construct 는 plain 기계 설정을 받습니다")
    if c < len(UNIV_PROGRAM):
        raise PreconditionError(f"c={c} 는 기계 상수 {len(UNIV_PROGRAM)} 이상이어야 합니다")
    cond_machine = machine.with_variant(CONDITIONAL)
    checker = ConditionalOracle(cond_machine, c, T)
    oracle = oracle or ConditionalOracle(cond_machine, c, T)

    programs = [p.bits for p in enumerate_programs(n)]
    terms = []
    for u, q in enumerate(programs):
        y = oracle(u, q)
        if y in checker.short_outputs(u, q):
            raise OracleContradictionError(
                f"오라클 응답 {render_bits(y)} 의 조건부 복잡도가 {c} 이하입니다",
                {'u': u, 'program': q, 'answer': y})
        terms.append(y)
    x = encode_sequence(terms)

    # 검증: 길이 <= n 인 어떤 프로그램도 x 를 출력하지 않음
    for q in programs:
        result = run(machine, q, T)
        if result.halted and result.output == x:
            raise InternalConsistencyError(f"대각화 실패: {q} 가 x 를 출력합니다",
                                           {'program': q, 'x': x})
    verified_by = 'scan'
    if plain_table is not None and len(x) <= plain_table.max_string_len:
        value = plain_table.value(x)
        if value is not None and value < n:
            raise InternalConsistencyError(f"표 값 {value} < {n}", {'x': x})
        verified_by = 'table'
    logger.info(f"✅ dnc_construct n={n} c={c}: |x|={len(x)} ({verified_by})")
    return DncResult(x, n, c, terms, verified_by)


def dnc_time_bounded_check(machine: MachineConfig, n: int, c: int, T: int) -> Dict[str, object]:
    """정확한 오라클과 안정화된 t' 의 C^t' 오라클이 같은 문자열을 주는지"""
    cond_machine = machine.with_variant(CONDITIONAL)
    exact = ConditionalOracle(cond_machine, c, T)
    exact_result = dnc_construct(machine, n, c, T, oracle=exact)
    stabilized = max(exact.max_halting_steps, 1)
    bounded = time_bounded_oracle(cond_machine, c, stabilized)
    bounded_terms = [bounded(u, p.bits) for u, p in enumerate(enumerate_programs(n))]
    bounded_string = encode_sequence(bounded_terms)
    return {
        'n': n,
        'c': c,
        'stabilized_time': stabilized,
        'exact': exact_result.string,
        'time_bounded': bounded_string,
        'equal': bounded_string == exact_result.string,
    }


# ------------------------------------------
# 표 저장 / 불러오기 / 내보내기
# ------------------------------------------

def _render_staircase(staircase: Tuple[Tuple[int, int], ...]) -> str:
    return ','.join(f"{length}:{steps}" for length, steps in staircase) or '-'


def _parse_staircase(text: str) -> Tuple[Tuple[int, int], ...]:
    if text == '-':
        return ()
    return tuple(tuple(int(v) for v in item.split(':')) for item in text.split(','))


def format_table(table: ComplexityTable) -> str:
    """버전이 붙은 줄 단위 텍스트 (재생성 시 바이트 동일)"""
    lines = [
        f"# {TABLE_FORMAT_VERSION}",
        f"machine_fingerprint: {table.machine.fingerprint()}",
    ]
    lines += [f"machine.{line}" for line in table.machine.to_text().splitlines()]
    lines += [
        f"variant_tag: {table.variant_tag}",
        f"condition: {render_bits(table.condition)}",
        f"N: {table.max_string_len}",
        f"L: {table.max_prog_len}",
        f"T: {table.budget}",
        "columns: string\tvalue\twitness\tstab_time\tstaircase",
    ]
    for x in table.strings():
        e = table.entries[x]
        lines.append('\t'.join([
            render_bits(x),
            '-' if e.value is None else str(e.value),
            '-' if e.witness is None else render_bits(e.witness),
            '-' if e.stabilization_time is None else str(e.stabilization_time),
            _render_staircase(e.staircase),
        ]))
    return '\n'.join(lines) + '\n'


def parse_table(text: str) -> ComplexityTable:
    header: Dict[str, str] = {}
    machine_lines = []
    rows = []
    lines = text.splitlines()
    if not lines or lines[0] != f"# {TABLE_FORMAT_VERSION}":
        raise ValueError("표 파일 버전이 맞지 않습니다")
    for line in lines[1:]:
        if line.startswith('machine.'):
            machine_lines.append(line[len('machine.'):])
        elif ': ' in line and '\t' not in line:
            key, value = line.split(': ', 1)
            header[key] = value
        elif line:
            rows.append(line.split('\t'))
    machine = MachineConfig.from_text('\n'.join(machine_lines))
    if machine.fingerprint() != header['machine_fingerprint']:
        raise ValueError("기계 지문이 일치하지 않습니다")
    entries = {}
    for string, value, witness, stab, staircase in rows:
        x = parse_bits(string)
        entries[x] = TableEntry(
            x,
            None if value == '-' else int(value),
            None if witness == '-' else parse_bits(witness),
            None if stab == '-' else int(stab),
            _parse_staircase(staircase),
        )
    return ComplexityTable(machine, int(header['N']), int(header['L']), int(header['T']),
                           entries, header['variant_tag'], parse_bits(header['condition']))


def save_table(table: ComplexityTable, path) -> Path:
    from utils.report_writer import atomic_write
    return atomic_write(path, format_table(table).encode('utf-8'))


def load_table(path) -> ComplexityTable:
    return parse_table(Path(path).read_text(encoding='utf-8'))


def table_to_frame(table: ComplexityTable) -> pd.DataFrame:
    """CSV 내보내기용 DataFrame (string, C, witness, stab_time)"""
    rows = []
    for x in table.strings():
        e = table.entries[x]
        rows.append({
            'string': render_bits(x),
            'C': e.value,
            'witness': render_bits(e.witness) if e.witness is not None else None,
            'stab_time': e.stabilization_time,
        })
    frame = pd.DataFrame(rows, columns=['string', 'C', 'witness', 'stab_time'])
    frame['C'] = frame['C'].astype('Int64')
    frame['stab_time'] = frame['stab_time'].astype('Int64')
    return frame


def table_cache_path(cache_dir, table_kind: str, machine: MachineConfig,
                     N: int, L: int, T: int) -> Path:
    """KOLMO_CACHE_DIR 아래 캐시 파일 경로"""
    name = f"{table_kind}_{machine.fingerprint()[:12]}_N{N}_L{L}_T{T}.tbl"
    return Path(cache_dir) / name


def load_or_build(kind: str, machine: MachineConfig, N: int, L: int, T: int,
                  workers: int = 1, cache_dir: Optional[str] = None,
                  work_ceiling: int = DEFAULT_WORK_CEILING) -> ComplexityTable:
    """캐시가 있으면 불러오고 없으면 생성 후 저장"""
    builders = {
        PLAIN: build_table,
        PREFIX: prefix_table,
    }
    if kind not in builders:
        raise ValueError(f"지원하지 않는 표 종류: {kind}")
    path = table_cache_path(cache_dir, kind, machine, N, L, T) if cache_dir else None
    if path is not None and path.exists():
        logger.info(f"📂 캐시된 표 사용: {path}")
        return load_table(path)
    table = builders[kind](machine, N, L, T, workers=workers, work_ceiling=work_ceiling)
    if path is not None:
        os.makedirs(path.parent, exist_ok=True)
        save_table(table, path)
    return table
