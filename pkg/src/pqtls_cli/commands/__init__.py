"""子命令模块"""
