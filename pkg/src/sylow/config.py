import os
from pathlib import Path

from dotenv import load_dotenv


# Переменные окружения можно задать в файле .env в корне проекта
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value else default


# Версия инструмента, попадает в каждый отчёт
TOOL_VERSION = '1.0.0'


# -------------------
# Бюджеты вычислений

# Максимальный размер перечисляемой группы (элементов)
ELEMENT_BUDGET = _env_int('SYLOW_ELEMENT_BUDGET', 2 ** 24)

# Максимум пар |A|*|B| для коммутаторов по всем элементам
PAIR_BUDGET = _env_int('SYLOW_PAIR_BUDGET', 2 ** 16)

# Размер порции при векторных проходах по группе
CHUNK_SIZE = _env_int('SYLOW_CHUNK_SIZE', 2 ** 18)

# Количество потоков для проходов по порциям
WORKERS = _env_int('SYLOW_WORKERS', 1)

# Мягкий лимит времени операции, секунды (только предупреждение в лог)
SOFT_TIME_BUDGET = _env_int('SYLOW_SOFT_TIME_BUDGET', 60)

# Таблица обратных элементов строится целиком до этого размера группы
INVERSE_TABLE_LIMIT = 2 ** 20


# -------------------
# Поле F_{q^2}

# Верхняя граница на q^2
MAX_FIELD_SIZE = 2 ** 16

# До этого размера поля строятся полные таблицы сложения и умножения
DENSE_TABLE_LIMIT = 1024


# -------------------
# Проверки

# Количество случайных проб по умолчанию
DEFAULT_SAMPLES = 1000

# Зерно генератора по умолчанию
DEFAULT_SEED = 0

# Если область меньше этого размера, проверка идёт полным перебором
EXHAUSTIVE_LIMIT = 2 ** 16

# Предел на размер группы для полного перебора подгрупп
BRUTEFORCE_LIMIT = 5 ** 4


# -------------------
# Окружение

# Каталог кэша групп
CACHE_DIR = Path(os.getenv('SYLOW_CACHE_DIR', './.sylow_cache'))

# Уровень логирования
LOG_LEVEL = os.getenv('SYLOW_LOG_LEVEL', 'INFO')
