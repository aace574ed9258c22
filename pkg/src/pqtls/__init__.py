"""PQTLS：后量子 TLS 风格握手与握手吞吐压测

包含以下子模块：
- config: 配置接口与环境变量解析
- crypto_suite: provider 接口、注册表、mock 实现
- toy_mlkem: toy ML-KEM-512（NTT、采样、FO 变换）
- toy_hashsig: toy WOTS + Merkle 哈希签名
- handshake: 消息编解码、密钥派生、双方状态机
- transport: TCP / 内存回环传输与并行服务端
- bench: 实时与建模压测、报告渲染
- db / service: 压测结果持久化
"""

__version__ = "0.1.0"
