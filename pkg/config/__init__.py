"""
配置管理包

提供统一的配置管理：
- 环境变量配置（可由 .env 文件提供）
- 求积与网格参数
- 校验容差与输出格式
"""

from .settings import Settings, check_environment, get_settings, reload_settings, update_settings

__all__ = [
    "Settings",
    "get_settings",
    "reload_settings",
    "update_settings",
    "check_environment",
]

__version__ = "0.1.0"
