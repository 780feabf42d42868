import logging
import struct
from pathlib import Path
from typing import Callable, Dict, Union

import numpy as np
import yaml

from ..errors import CacheError
from ..groups.base_group import Group
from ..groups.matrix_group import lower_codes
from ..groups.unitary import UnitaryParams, UnitarySylowGroup, sylow_field
from ..groups.wreath import WreathGroup


logger = logging.getLogger(__name__)

# Файл кэша: MAGIC, длина заголовка '<I', YAML-заголовок, элементы '<u2'
MAGIC = b'SYLOWGC1'
ELEMENT_DTYPE = '<u2'

CacheableGroup = Union[UnitarySylowGroup, WreathGroup]


def group_header(G: CacheableGroup) -> Dict:
    if isinstance(G, UnitarySylowGroup):
        return {
            'representation': 'matrix',
            'p': G.params.p,
            'k': G.params.k,
            'modulus': [int(c) for c in G.field.modulus],
            'n': G.params.n,
            'parity': G.params.parity,
            'count': G.order,
        }
    if isinstance(G, WreathGroup):
        return {
            'representation': 'wreath',
            'p': G.p,
            'r': G.r,
            'height': G.height,
            'count': G.order,
        }
    raise CacheError(f'{G!r} cannot be cached')


def element_section(G: CacheableGroup) -> bytes:
    # Матрицы: n^2 индексов поля на элемент; сплетения: разряды представления
    reps = G.reps(np.arange(G.order, dtype=np.int64)).reshape(G.order, -1)
    if reps.size and reps.max() > np.iinfo(np.uint16).max:
        raise CacheError('element digits do not fit into 16 bits')
    return reps.astype(ELEMENT_DTYPE).tobytes()


def write_group_cache(path: Union[str, Path], G: CacheableGroup) -> Path:
    """
    Сохраняет группу в файл кэша.

    :param path: Путь файла.
    :param G: Силовская подгруппа или башня сплетений.
    :return: Путь записанного файла.
    """
    path = Path(path)
    header = yaml.safe_dump(group_header(G), sort_keys=True).encode('utf-8')
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'wb') as f:
            f.write(MAGIC)
            f.write(struct.pack('<I', len(header)))
            f.write(header)
            f.write(element_section(G))
    except OSError as e:
        raise CacheError(f'cannot write cache {path}: {e}') from e
    logger.info('Кэш записан: %s (%d элементов)', path, G.order)
    return path


def read_header(path: Union[str, Path]) -> Dict:
    header, _ = _read(Path(path), with_elements=False)
    return header


def _read(path: Path, with_elements: bool = True):
    try:
        with open(path, 'rb') as f:
            if f.read(len(MAGIC)) != MAGIC:
                raise CacheError(f'{path} is not a group cache')
            (length,) = struct.unpack('<I', f.read(4))
            header = yaml.safe_load(f.read(length).decode('utf-8'))
            data = f.read() if with_elements else b''
    except OSError as e:
        raise CacheError(f'cannot read cache {path}: {e}') from e
    except (struct.error, yaml.YAMLError, UnicodeDecodeError) as e:
        raise CacheError(f'corrupted cache header in {path}: {e}') from e
    return header, data


def read_group_cache(path: Union[str, Path]) -> CacheableGroup:
    '''
    Восстанавливает группу из файла кэша, проверяя число элементов.
    '''
    path = Path(path)
    header, data = _read(path)
    elements = np.frombuffer(data, dtype=ELEMENT_DTYPE).astype(np.int64)
    if header.get('representation') == 'matrix':
        params = UnitaryParams.from_k(header['p'], header['k'], header['n'])
        field = sylow_field(params)
        if list(field.modulus) != list(header['modulus']):
            raise CacheError(f'{path}: modulus {header["modulus"]} differs from {list(field.modulus)}')
        n = params.n
        if elements.size != header['count'] * n * n:
            raise CacheError(f'{path}: element section has wrong size')
        codes = lower_codes(field, n, elements.reshape(header['count'], n, n))
        G = UnitarySylowGroup(params, codes=codes)
    elif header.get('representation') == 'wreath':
        G = WreathGroup(header['p'], header['r'], header['height'])
        if elements.size != G.order * G.lengths[-1]:
            raise CacheError(f'{path}: element section has wrong size')
        stored = G.encode(elements.reshape(G.order, -1))
        if not np.array_equal(stored, G.codes):
            raise CacheError(f'{path}: wreath elements are not in canonical order')
    else:
        raise CacheError(f'{path}: unknown representation {header.get("representation")!r}')
    if G.order != header['count']:
        raise CacheError(f'{path}: header count {header["count"]} differs from {G.order}')
    return G


def get_or_build(path: Union[str, Path], build: Callable[[], CacheableGroup], expected: Dict) -> CacheableGroup:
    """
    Берёт группу из кэша, если заголовок совместим, иначе строит и сохраняет.

    Параметры:
        path (Path): Файл кэша.
        build (Callable): Построение группы при промахе.
        expected (dict): Поля заголовка, которые должны совпасть.

    Returns:
        Group: Группа из кэша или построенная заново.

    Raises:
        CacheError: Файл есть, но заголовок несовместим, группу нельзя
            сохранить, или ошибка ввода-вывода.
    """
    path = Path(path)
    if path.exists():
        header = read_header(path)
        mismatched = {key: value for key, value in expected.items() if header.get(key) != value}
        if mismatched:
            raise CacheError(f'{path}: header mismatch on {sorted(mismatched)}')
        logger.info('Кэш найден: %s', path)
        return read_group_cache(path)
    G = build()
    if not is_cacheable(G):
        raise CacheError(f'{G!r} cannot be cached')
    write_group_cache(path, G)
    return G


def cache_name(header: Dict) -> str:
    if header['representation'] == 'matrix':
        return f'sylow_p{header["p"]}_k{header["k"]}_n{header["n"]}.cache'
    return f'wreath_p{header["p"]}_r{header["r"]}_h{header["height"]}.cache'


def is_cacheable(G: Group) -> bool:
    return isinstance(G, (UnitarySylowGroup, WreathGroup))
