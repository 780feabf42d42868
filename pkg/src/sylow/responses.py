from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, Field

from .config import TOOL_VERSION


Command = Literal['construct', 'verify', 'compute', 'conjecture']
Suite = Literal['flip', 'sylow', 'formulas', 'centralizer', 'qseries', 'wreath']
GroupKind = Literal['unitary', 'wreath']


class RunConfig(BaseModel):
    command: Command                  # Выполняемая команда
    kind: GroupKind = 'unitary'       # Тип группы
    p: int                            # Простое p
    k: Optional[int] = None           # Степень расширения, q = p^k
    q: Optional[int] = None           # Порядок поля F_q
    n: Optional[int] = None           # Размер матриц
    m: Optional[int] = None           # Размер блоков для набора flip
    r: Optional[int] = None           # Показатель нижней циклической группы C_{p^r}
    height: Optional[int] = None      # Число слоёв сплетения
    suite: Optional[Suite] = None     # Набор проверок для verify
    budget: int                       # Лимит элементов
    seed: int                         # Зерно генератора
    samples: int                      # Количество случайных проб
    out: Optional[str] = None         # Путь отчёта или кэша
    cache_dir: Optional[str] = None   # Каталог кэша групп


class CheckRecord(BaseModel):
    name: str                                       # Имя проверки
    claim: str                                      # Проверяемое утверждение
    passed: bool                                    # Итог проверки
    counts: Dict[str, Union[int, str, bool]] = Field(default_factory=dict)
    seconds: Optional[float] = None                 # Время, только с --timing
    note: Optional[str] = None                      # Пометка (finding, skipped, unverified)


class Report(BaseModel):
    tool_version: str = TOOL_VERSION
    config: RunConfig
    checks: List[CheckRecord] = Field(default_factory=list)
    results: Dict[str, Union[int, str, bool, List[int]]] = Field(default_factory=dict)
    verdict: bool = True

    def add(self, records: List[CheckRecord]) -> None:
        self.checks.extend(records)
        self.verdict = all(record.passed for record in self.checks)

    def to_yaml(self) -> str:
        return yaml.safe_dump(
            self.model_dump(mode='json', exclude_none=True),
            sort_keys=False, allow_unicode=True,
        )

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_yaml(), encoding='utf-8')
