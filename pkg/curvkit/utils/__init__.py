from .logger import logger
from .helpers import StageTimer, chunk_array, index_blocks, make_rng

__all__ = [
    'logger',
    'StageTimer',
    'chunk_array',
    'index_blocks',
    'make_rng',
]
