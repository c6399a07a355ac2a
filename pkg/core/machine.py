# ==========================================
# core/machine.py - 토이 범용 기계 (plain / prefix / conditional)
# ==========================================

import hashlib
import logging
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from utils.bitstrings import (
    EMPTY, gamma_decode, iter_strings, is_prefix, sequence_term, unpair_string,
)

logger = logging.getLogger(__name__)

PLAIN = 'plain'
PREFIX = 'prefix'
CONDITIONAL = 'conditional'
VARIANTS = (PLAIN, PREFIX, CONDITIONAL)

OPCODE_TABLE = 'toy-v1'

HALTED = 'halted'
BUDGET_EXCEEDED = 'budget_exceeded'
FAULT = 'fault'

# 명령어 표 (접두 부호)
HALT, RAW, EMIT0, EMIT1, INC, LOOP, DUP, ECHO, UNIV = (
    'HALT', 'RAW', 'EMIT0', 'EMIT1', 'INC', 'LOOP', 'DUP', 'ECHO', 'UNIV'
)
# DUP 는 출력을 두 배로 (빈 출력이면 '0'), 그래서 0^(2^k) 는 k+1 비트
OPCODES: Dict[str, str] = {
    '0': DUP,
    '10': EMIT0,
    '110': RAW,
    '1110': EMIT1,
    '111100': HALT,
    '111101': INC,
    '111110': LOOP,    # + 1비트 피연산자
    '1111110': ECHO,
    '1111111': UNIV,
}
OPCODE_BITS = {name: bits for bits, name in OPCODES.items()}
LOOP_OPERAND_BITS = 1

# 평문 기계에서 RAW 로 x 를 출력하는 프로그램 길이 = |x| + 3
LITERAL_OVERHEAD = len(OPCODE_BITS[RAW])
ECHO_PROGRAM = OPCODE_BITS[ECHO]
UNIV_PROGRAM = OPCODE_BITS[UNIV]


@dataclass(frozen=True)
class MachineConfig:
    """고정된 인터프리터 D 의 설정"""
    variant: str = PLAIN
    opcode_table: str = OPCODE_TABLE
    max_steps_hard: int = 100000
    memory_limit: int = 64
    max_program_len: int = 32

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"지원하지 않는 기계 변형: {self.variant}")
        if self.opcode_table != OPCODE_TABLE:
            raise ValueError(f"알 수 없는 명령어 표: {self.opcode_table}")
        if self.max_steps_hard < 1:
            raise ValueError("max_steps_hard 는 1 이상이어야 합니다")
        if self.memory_limit < 1:
            raise ValueError("memory_limit 는 1 이상이어야 합니다")

    def with_variant(self, variant: str) -> 'MachineConfig':
        return MachineConfig(variant, self.opcode_table, self.max_steps_hard,
                             self.memory_limit, self.max_program_len)

    def to_text(self) -> str:
        """key = value 형식 직렬화 (필드 순서 고정)"""
        return "".join(f"{key} = {value}\n" for key, value in asdict(self).items())

    @classmethod
    def from_text(cls, text: str) -> 'MachineConfig':
        values: Dict[str, object] = {}
        for raw_line in text.splitlines():
            line = raw_line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError(f"기계 설정 형식 오류: {raw_line!r}")
            key, value = (part.strip() for part in line.split('=', 1))
            if key in ('variant', 'opcode_table'):
                values[key] = value
            elif key in ('max_steps_hard', 'memory_limit', 'max_program_len'):
                values[key] = int(value)
            else:
                raise ValueError(f"알 수 없는 기계 설정 키: {key}")
        return cls(**values)

    @classmethod
    def from_dict(cls, data: Dict) -> 'MachineConfig':
        known = {k: data[k] for k in ('variant', 'opcode_table', 'max_steps_hard',
                                      'memory_limit', 'max_program_len') if k in data}
        return cls(**known)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_text().encode('utf-8')).hexdigest()


@dataclass(frozen=True)
class Program:
    """비트열 프로그램 p"""
    bits: str

    def __post_init__(self):
        if any(ch not in '01' for ch in self.bits):
            raise ValueError(f"프로그램은 0/1 문자열이어야 합니다: {self.bits!r}")

    @property
    def length(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits


@dataclass(frozen=True)
class RunResult:
    """실행 결과"""
    outcome: str
    output: Optional[str] = None
    steps: Optional[int] = None
    bits_consumed: Optional[int] = None
    reason: str = ''

    @property
    def halted(self) -> bool:
        return self.outcome == HALTED

    def describe(self) -> str:
        if self.halted:
            return f"{HALTED}({self.output or '-'},{self.steps})"
        return f"{self.outcome}({self.reason})" if self.reason else self.outcome


class _SourceExhausted(Exception):
    pass


class _Interpreter:
    """명령어 표 toy-v1 의 해석기 (세 변형 공통)"""

    def __init__(self, config: MachineConfig, bits: str, condition: str, budget: int):
        self.config = config
        self.bits = bits
        self.condition = condition
        self.budget = budget
        self.demand_driven = config.variant == PREFIX
        self.max_read = 0

    def _bit(self, pos: int) -> Optional[str]:
        if pos < len(self.bits):
            self.max_read = max(self.max_read, pos + 1)
            return self.bits[pos]
        if self.demand_driven:
            raise _SourceExhausted()
        return None

    def _decode(self, pos: int) -> Tuple[Optional[Tuple[str, object]], int]:
        """pos 에서 명령어 하나를 읽음. 경계에서 프로그램이 끝나면 (None, pos)"""
        first = self._bit(pos)
        if first is None:
            return None, pos
        code = first
        cursor = pos + 1
        while code not in OPCODES:
            bit = self._bit(cursor)
            if bit is None:
                raise ValueError("decode: 잘린 명령어")
            code += bit
            cursor += 1
        name = OPCODES[code]
        if name == LOOP:
            operand = ''
            for _ in range(LOOP_OPERAND_BITS):
                bit = self._bit(cursor)
                if bit is None:
                    raise ValueError("decode: 잘린 LOOP 피연산자")
                operand += bit
                cursor += 1
            return (name, int(operand, 2)), cursor
        if name == RAW:
            if self.demand_driven:
                literal, cursor = self._read_counted_literal(cursor)
            else:
                literal = self.bits[cursor:]
                self.max_read = len(self.bits)
                cursor = len(self.bits)
            return (name, literal), cursor
        return (name, None), cursor

    def _read_counted_literal(self, cursor: int) -> Tuple[str, int]:
        # gamma(n+1) 뒤에 n 비트
        zeros = 0
        while self._bit(cursor + zeros) == '0':
            zeros += 1
        header = ''.join(self._bit(cursor + zeros + i) for i in range(zeros + 1))
        decoded = gamma_decode('0' * zeros + header)
        length = decoded[0] - 1
        cursor += 2 * zeros + 1
        literal = ''.join(self._bit(cursor + i) for i in range(length))
        return literal, cursor + length

    def _result(self, outcome: str, output: Optional[str] = None, steps: Optional[int] = None,
                reason: str = '') -> RunResult:
        consumed = self.max_read if self.demand_driven and outcome == HALTED else None
        return RunResult(outcome, output, steps, consumed, reason)

    def run(self) -> RunResult:
        limit = self.config.memory_limit
        instructions: List[Tuple[str, object]] = []
        next_bit = 0
        idx = 0
        register = 0
        output = EMPTY
        steps = 0
        seen = set()

        while True:
            if steps >= self.budget:
                return self._result(BUDGET_EXCEEDED)
            if idx == len(instructions):
                try:
                    instruction, next_bit = self._decode(next_bit)
                except _SourceExhausted:
                    return self._result(FAULT, reason='source exhausted')
                except ValueError as e:
                    return self._result(FAULT, reason=str(e))
                if instruction is None:
                    # 평문 변형: 프로그램 끝 = 암묵적 정지
                    return self._result(HALTED, output, steps + 1)
                instructions.append(instruction)

            name, arg = instructions[idx]
            steps += 1

            if name == HALT:
                return self._result(HALTED, output, steps)
            if name == RAW:
                output += arg
                if len(output) > limit:
                    return self._result(FAULT, reason='memory')
                return self._result(HALTED, output, steps)
            if name == EMIT0 or name == EMIT1:
                output += '0' if name == EMIT0 else '1'
                if len(output) > limit:
                    return self._result(FAULT, reason='memory')
                idx += 1
            elif name == INC:
                register += 1
                if register > limit:
                    return self._result(FAULT, reason='memory')
                idx += 1
            elif name == LOOP:
                if register > 0:
                    register -= 1
                    target = max(0, idx - (arg + 1))
                    state = (target, register, output)
                    if state in seen:
                        # 같은 상태 재방문 = 영원히 멈추지 않음
                        return self._result(BUDGET_EXCEEDED, reason='cycle')
                    seen.add(state)
                    idx = target
                else:
                    idx += 1
            elif name == DUP:
                output = output + output if output else '0'
                if len(output) > limit:
                    return self._result(FAULT, reason='memory')
                idx += 1
            elif name == ECHO:
                output += self.condition
                if len(output) > limit:
                    return self._result(FAULT, reason='memory')
                idx += 1
            elif name == UNIV:
                pair = unpair_string(self.condition)
                if pair is None:
                    return self._result(FAULT, reason='condition is not a pair')
                term_index, inner_bits = pair
                inner_config = self.config.with_variant(PLAIN)
                remaining = self.budget - (steps - 1)
                inner = _Interpreter(inner_config, inner_bits, EMPTY, remaining).run()
                if inner.outcome == BUDGET_EXCEEDED:
                    return self._result(BUDGET_EXCEEDED, reason=inner.reason)
                if inner.outcome == FAULT:
                    return self._result(FAULT, reason=f'nested {inner.reason}')
                steps += max(1, inner.steps) - 1
                if steps > self.budget:
                    return self._result(BUDGET_EXCEEDED)
                output += sequence_term(inner.output, term_index)
                if len(output) > limit:
                    return self._result(FAULT, reason='memory')
                idx += 1


def _check_budget(config: MachineConfig, budget: int):
    if budget < 0:
        raise ValueError(f"budget 는 음수일 수 없습니다: {budget}")
    if budget > config.max_steps_hard:
        raise ValueError(f"budget {budget} 가 max_steps_hard {config.max_steps_hard} 를 초과합니다")


def _as_bits(p) -> str:
    return p.bits if isinstance(p, Program) else Program(p).bits


def run_plain(config: MachineConfig, p, budget: int) -> RunResult:
    """평문 기계 실행"""
    if config.variant != PLAIN:
        raise ValueError("run_plain 은 plain 변형에서만 사용합니다")
    _check_budget(config, budget)
    bits = _as_bits(p)
    if len(bits) > config.max_program_len:
        raise ValueError(f"프로그램 길이 {len(bits)} 가 최대 {config.max_program_len} 를 초과합니다")
    return _Interpreter(config, bits, EMPTY, budget).run()


def run_prefix(config: MachineConfig, bit_source: str, budget: int) -> RunResult:
    """접두 기계 실행: 비트를 필요할 때만 읽음"""
    if config.variant != PREFIX:
        raise ValueError("run_prefix 는 prefix 변형에서만 사용합니다")
    _check_budget(config, budget)
    return _Interpreter(config, _as_bits(bit_source), EMPTY, budget).run()


def run_conditional(config: MachineConfig, p, condition: str, budget: int) -> RunResult:
    """조건부 기계 실행: condition 은 읽기 전용 입력"""
    if config.variant != CONDITIONAL:
        raise ValueError("run_conditional 은 conditional 변형에서만 사용합니다")
    _check_budget(config, budget)
    bits = _as_bits(p)
    if len(bits) > config.max_program_len:
        raise ValueError(f"프로그램 길이 {len(bits)} 가 최대 {config.max_program_len} 를 초과합니다")
    return _Interpreter(config, bits, _as_bits(condition), budget).run()


def run(config: MachineConfig, p, budget: int, condition: str = EMPTY) -> RunResult:
    """변형에 맞는 실행 함수로 분기"""
    if config.variant == PLAIN:
        return run_plain(config, p, budget)
    if config.variant == PREFIX:
        return run_prefix(config, p, budget)
    return run_conditional(config, p, condition, budget)


def enumerate_programs(max_len: int) -> Iterator[Program]:
    """길이 max_len 이하 프로그램을 길이-사전식으로 하나씩"""
    if max_len < 0:
        raise ValueError(f"max_len 은 0 이상이어야 합니다: {max_len}")
    for bits in iter_strings(max_len):
        yield Program(bits)


def halting_fingerprint(config: MachineConfig, max_len: int, budget: int,
                        conditions: Iterable[str] = (EMPTY,)) -> str:
    """전체 열거 결과의 SHA-256 지문"""
    digest = hashlib.sha256()
    digest.update(config.to_text().encode('utf-8'))
    for condition in conditions:
        for program in enumerate_programs(max_len):
            result = run(config, program, budget, condition)
            line = f"{condition}\t{program.bits}\t{result.describe()}\t{result.bits_consumed}\n"
            digest.update(line.encode('utf-8'))
    return digest.hexdigest()


def prefix_domain(config: MachineConfig, max_len: int, budget: int) -> List[str]:
    """정지하는 접두 실행이 정확히 소비한 프로그램들"""
    domain = []
    for program in enumerate_programs(max_len):
        result = run_prefix(config, program.bits, budget)
        if result.halted and result.bits_consumed == program.length:
            domain.append(program.bits)
    return domain


def is_antichain(words: Iterable[str]) -> bool:
    ordered = sorted(set(words))
    # 사전식 정렬에서는 접두어가 바로 앞에 온다
    return all(not is_prefix(a, b) for a, b in zip(ordered, ordered[1:]))


def kraft_sum(lengths: Iterable[int]) -> Fraction:
    return sum((Fraction(1, 2 ** n) for n in lengths), Fraction(0))


def literal_program(x: str) -> str:
    """평문 기계에서 x 를 출력하는 RAW 프로그램"""
    return OPCODE_BITS[RAW] + x


def measure_machine_constant(config: MachineConfig, max_string_len: int, budget: int) -> int:
    """c_mach = max_{|x|<=N} (최단 프로그램 길이 - |x|) 를 전수 열거로 측정"""
    shortest: Dict[str, int] = {}
    for program in enumerate_programs(max_string_len + LITERAL_OVERHEAD):
        result = run(config.with_variant(PLAIN), program, budget)
        if result.halted and len(result.output) <= max_string_len:
            shortest.setdefault(result.output, program.length)
    missing = [x for x in iter_strings(max_string_len) if x not in shortest]
    if missing:
        raise ValueError(f"출력되지 않는 문자열이 있습니다: {missing[0]!r}")
    return max(length - len(x) for x, length in shortest.items())
