"""
配置管理模块
"""
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Optional

from cfx.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS = {
    "CFX_FUEL": "",
    "CFX_LOG_LEVEL": "WARNING",
    "CFX_ENUM_MAX_LEN": "5",
    "CFX_ALPHABET": "",
}


def default_env_path() -> Path:
    """默认读取当前工作目录下的 .env"""
    return Path.cwd() / ".env"


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def load_env_file(env_path: Optional[str] = None) -> Dict[str, str]:
    """
    读取 .env 文件中的 CFX_* 配置项

    文件不存在时返回空字典；非 KEY=VALUE 行与未知的 CFX_* 键会记录警告后忽略，
    其他前缀的键直接忽略。
    """
    path = Path(env_path) if env_path else default_env_path()
    values: Dict[str, str] = {}
    if not path.is_file():
        return values

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            logger.warning("%s 第 %d 行不是 KEY=VALUE 格式，已忽略", path, lineno)
            continue
        if key not in DEFAULT_SETTINGS:
            if key.startswith("CFX_"):
                logger.warning("%s 中的未知配置项 %s，已忽略", path, key)
            continue
        values[key] = _unquote(value.strip())

    return values


@dataclass(frozen=True)
class Settings:
    fuel: Optional[int]
    log_level: str
    enum_max_len: int
    alphabet: str


def _parse_int(key: str, value: str, allow_empty: bool = False) -> Optional[int]:
    if not value and allow_empty:
        return None
    try:
        number = int(value)
    except ValueError:
        raise ConfigError(f"{key} 必须是整数，当前值：{value!r}") from None
    if number < 0:
        raise ConfigError(f"{key} 不能为负数，当前值：{number}")
    return number


def load_settings(env_path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None) -> Settings:
    """合并默认值、.env 文件与进程环境变量（后者优先）"""
    values = dict(DEFAULT_SETTINGS)
    values.update(load_env_file(env_path))
    environ = os.environ if environ is None else environ
    values.update({k: environ[k] for k in DEFAULT_SETTINGS if k in environ})

    return Settings(
        fuel=_parse_int("CFX_FUEL", values["CFX_FUEL"], allow_empty=True),
        log_level=values["CFX_LOG_LEVEL"].upper() or "WARNING",
        enum_max_len=_parse_int("CFX_ENUM_MAX_LEN", values["CFX_ENUM_MAX_LEN"]),
        alphabet=values["CFX_ALPHABET"],
    )
