from src.utils.config import build_params, load_config, parse_overrides
from src.utils.output import write_csv, write_json

__all__ = ['build_params', 'load_config', 'parse_overrides', 'write_csv', 'write_json']
