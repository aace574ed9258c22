"""PQTLS 命令行

装配配置、日志和注册表，并注册子命令：
  - `.commands.serve`
  - `.commands.bench`
  - `.commands.registry`
  - `.commands.keygen`
  - `.commands.debug`
  - `.commands.history`
"""
