"""传输层测试：回环端点、服务端并发与 TCP"""

import asyncio

import pytest
from pydantic import ValidationError

from pqtls.bench import handshake_bytes
from pqtls.crypto_suite import build_default_registry
from pqtls.handshake import (
    Alert,
    AlertCode,
    ClientConfig,
    DecodeError,
    Finished,
    HandshakeAlertError,
    client_begin,
    client_process_server_hello,
)
from pqtls.transport import (
    ConnectionRefusedTransportError,
    HandshakeOutcome,
    HandshakeServer,
    HandshakeTimeoutError,
    ServerConfig,
    connect_and_handshake,
    loopback_pair,
    parse_address,
    run_client_handshake,
)

KEM = "kem.mock.kyber768"
SIG = "sig.mock.falcon512"


def _rng(i: int) -> bytes:
    return i.to_bytes(4, "big") * 8


@pytest.fixture
def server_config(registry):
    def _make(**overrides) -> ServerConfig:
        values = {
            "kem_algs": [registry.metadata(KEM).wire_code],
            "sig_algs": [registry.metadata(SIG).wire_code],
            "rng_seed": b"\x05" * 32,
        }
        values.update(overrides)
        return ServerConfig(**values)

    return _make


def _client_config(registry, server: HandshakeServer, timeout_ms=None) -> ClientConfig:
    return ClientConfig(
        kem_alg=registry.metadata(KEM).wire_code,
        sig_algs=[registry.metadata(SIG).wire_code],
        trust_anchor=server.trust_anchor,
        timeout_ms=timeout_ms,
    )


class TestLoopback:
    """回环端点"""

    async def test_bytes_arrive_in_order(self):
        a, b = loopback_pair()
        await a.send_raw(b"hello ")
        await a.send_raw(b"world")
        assert await b.recv_exactly(11) == b"hello world"
        assert (a.bytes_sent, b.bytes_received) == (11, 11)

    async def test_latency(self):
        a, b = loopback_pair(latency_s=0.05)
        loop = asyncio.get_running_loop()
        started = loop.time()
        await a.send_raw(b"x" * 10)
        await b.recv_exactly(10)
        assert loop.time() - started >= 0.045

    async def test_bandwidth(self):
        a, b = loopback_pair(bandwidth_Bps=100_000)
        loop = asyncio.get_running_loop()
        started = loop.time()
        await a.send_raw(b"x" * 10_000)
        await b.recv_exactly(10_000)
        assert loop.time() - started >= 0.095

    async def test_eof_and_partial_frames(self):
        a, b = loopback_pair()
        await a.close()
        assert await b.recv_exactly(5) is None
        c, d = loopback_pair()
        await c.send_raw(b"abc")
        await c.close()
        with pytest.raises(DecodeError):
            await d.recv_exactly(5)

    async def test_send_after_close(self):
        a, _ = loopback_pair()
        await a.close()
        with pytest.raises(ConnectionResetError):
            await a.send_raw(b"x")

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            loopback_pair(latency_s=-1)
        with pytest.raises(ValueError):
            loopback_pair(bandwidth_Bps=0)


class TestInMemoryServer:
    """服务端逻辑（回环连接）"""

    async def test_key_echo_matches_client_keys(self, registry, server_config):
        server = HandshakeServer(server_config(echo_key_hash=True), registry)
        await server.start_in_memory()
        try:
            keys, stats = await run_client_handshake(
                server.connect_loopback(), _client_config(registry, server), _rng(1), registry
            )
        finally:
            await server.stop()
        assert stats.ok
        assert stats.key_echo == keys.fingerprint()
        assert server.stats.successes == 1
        assert server.stats.failures == 0

    async def test_wire_bytes_are_conserved(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)
        await server.start_in_memory()
        try:
            _, stats = await run_client_handshake(
                server.connect_loopback(), _client_config(registry, server), _rng(2), registry
            )
        finally:
            await server.stop()
        assert server.stats.counters.snapshot() == (stats.bytes_received, stats.bytes_sent)
        expected = handshake_bytes(registry.metadata(KEM), registry.metadata(SIG))
        assert stats.total_bytes == expected
        assert server.stats.connections[0].total_bytes == expected

    async def test_latency_is_visible_to_client(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)
        await server.start_in_memory()
        try:
            _, stats = await run_client_handshake(
                server.connect_loopback(latency_s=0.02), _client_config(registry, server), _rng(3), registry
            )
        finally:
            await server.stop()
        # CH、SH、EOF 三次单向传输
        assert stats.latency_ns >= 55_000_000

    async def _concurrent(self, registry, server, clients: int, per_client: int):
        config = _client_config(registry, server)

        async def worker(client_id: int):
            results = []
            for attempt in range(per_client):
                keys, stats = await run_client_handshake(
                    server.connect_loopback(), config, _rng(client_id * 1000 + attempt), registry
                )
                assert stats.ok
                results.append(keys)
            return results

        batches = await asyncio.gather(*(worker(i) for i in range(clients)))
        return [keys for batch in batches for keys in batch]

    async def test_concurrent_clients(self, registry, server_config):
        server = HandshakeServer(server_config(workers=2), registry)
        await server.start_in_memory()
        try:
            keys = await self._concurrent(registry, server, clients=8, per_client=10)
        finally:
            await server.stop()
        assert server.stats.successes == 80
        assert len({k.client_traffic for k in keys}) == 80

    @pytest.mark.slow
    async def test_concurrent_clients_full(self, registry, server_config):
        server = HandshakeServer(server_config(workers=4, max_connections=64), registry)
        await server.start_in_memory()
        try:
            keys = await self._concurrent(registry, server, clients=8, per_client=100)
        finally:
            await server.stop()
        assert server.stats.successes == 800
        assert len({k.client_traffic for k in keys}) == 800

    async def test_single_worker_serialises_compute(self, registry, server_config):
        server = HandshakeServer(server_config(workers=1), registry)
        await server.start_in_memory()
        try:
            await self._concurrent(registry, server, clients=6, per_client=1)
        finally:
            await server.stop()
        windows = sorted(server.stats.compute_windows)
        assert len(windows) == 12  # 每次握手 server_respond + Finished 校验
        for (_, previous_end), (start, _) in zip(windows, windows[1:]):
            assert start >= previous_end

    async def test_garbage_does_not_affect_other_connections(self, registry, server_config):
        server = HandshakeServer(server_config(workers=2), registry)
        await server.start_in_memory()
        try:
            garbage = server.connect_loopback()
            await garbage.send_raw(b"\xff" * 16)
            honest = self._concurrent(registry, server, clients=4, per_client=3)
            alert, keys = await asyncio.gather(garbage.recv_message(), honest)
        finally:
            await server.stop()
        assert isinstance(alert, Alert)
        assert alert.code is AlertCode.DECODE_ERROR
        assert len(keys) == 12
        assert server.stats.successes == 12
        assert server.stats.alerts(AlertCode.DECODE_ERROR) == 1

    async def test_bad_finished_alert(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)
        await server.start_in_memory()
        try:
            endpoint = server.connect_loopback()
            client_hello, pending = client_begin(_client_config(registry, server), _rng(4), registry)
            await endpoint.send_message(client_hello)
            server_hello = await endpoint.recv_message()
            client_process_server_hello(pending, server_hello, registry)
            await endpoint.send_message(Finished(mac=bytes(32)))
            reply = await endpoint.recv_message()
            assert await endpoint.recv_message() is None
        finally:
            await server.stop()
        assert isinstance(reply, Alert)
        assert reply.code is AlertCode.BAD_FINISHED
        assert server.stats.alerts(AlertCode.BAD_FINISHED) == 1

    async def test_client_abort_is_recorded(self, registry, server_config, make_identity):
        server = HandshakeServer(server_config(), registry)
        _, wrong_anchor = make_identity(KEM, SIG, seed=b"\x42" * 32)
        config = _client_config(registry, server).model_copy(update={"trust_anchor": wrong_anchor})
        await server.start_in_memory()
        try:
            with pytest.raises(HandshakeAlertError) as excinfo:
                await run_client_handshake(server.connect_loopback(), config, _rng(5), registry)
        finally:
            await server.stop()
        assert excinfo.value.code is AlertCode.BAD_CERTIFICATE
        assert not excinfo.value.remote
        connection = server.stats.connections[0]
        assert connection.outcome is HandshakeOutcome.ALERT
        assert connection.alert is AlertCode.BAD_CERTIFICATE

    async def test_server_busy(self, registry, server_config):
        server = HandshakeServer(server_config(max_connections=1), registry)
        await server.start_in_memory()
        try:
            idle = server.connect_loopback()
            busy = server.connect_loopback()
            with pytest.raises(HandshakeAlertError) as excinfo:
                await run_client_handshake(busy, _client_config(registry, server), _rng(6), registry)
            await idle.close()
        finally:
            await server.stop()
        assert excinfo.value.code is AlertCode.SERVER_BUSY
        assert excinfo.value.remote
        assert server.stats.alerts(AlertCode.SERVER_BUSY) == 1

    async def test_exhausted_signing_key_sends_busy_alert(self):
        """h=2 的 toy 哈希签名只够 4 次握手，第 5 次收到 SERVER_BUSY 告警"""
        small = build_default_registry(hashsig_height=2)
        kem, sig = small.metadata(KEM).wire_code, small.metadata("sig.toy_wots_merkle").wire_code
        server = HandshakeServer(ServerConfig(kem_algs=[kem], sig_algs=[sig], rng_seed=b"\x05" * 32), small)
        await server.start_in_memory()
        try:
            config = ClientConfig(kem_alg=kem, sig_algs=[sig], trust_anchor=server.trust_anchor)
            for i in range(4):
                await run_client_handshake(server.connect_loopback(), config, _rng(20 + i), small)
            with pytest.raises(HandshakeAlertError) as excinfo:
                await run_client_handshake(server.connect_loopback(), config, _rng(30), small)
        finally:
            await server.stop()
        assert excinfo.value.code is AlertCode.SERVER_BUSY
        assert excinfo.value.remote
        assert server.stats.successes == 4
        exhausted = server.stats.connections[-1]
        assert exhausted.outcome is HandshakeOutcome.ALERT
        assert exhausted.alert is AlertCode.SERVER_BUSY

    async def test_connect_requires_running_server(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)
        with pytest.raises(RuntimeError):
            server.connect_loopback()


class TestTcp:
    """TCP 监听"""

    async def test_handshake_over_tcp(self, registry, server_config):
        async with HandshakeServer(server_config(echo_key_hash=True), registry) as server:
            keys, stats = await connect_and_handshake(
                _client_config(registry, server, timeout_ms=5000), server.address, _rng(7), registry
            )
        assert stats.ok
        assert stats.key_echo == keys.fingerprint()
        assert server.stats.successes == 1
        assert server.stats.counters.snapshot() == (stats.bytes_received, stats.bytes_sent)

    async def test_start_and_stop_without_connections(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)
        await server.start()
        assert server.is_running
        assert server.address.startswith("127.0.0.1:")
        await server.stop()
        assert not server.is_running
        assert server.stats.connections == []
        await server.stop()

    async def test_closed_port(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)
        await server.start()
        address = server.address
        await server.stop()
        with pytest.raises(ConnectionRefusedTransportError):
            await connect_and_handshake(_client_config(registry, server, timeout_ms=2000), address, _rng(8), registry)

    async def test_timeout(self, registry, server_config):
        server = HandshakeServer(server_config(), registry)

        async def silent(reader, writer):
            await asyncio.sleep(1)
            writer.close()

        listener = await asyncio.start_server(silent, "127.0.0.1", 0)
        host, port = listener.sockets[0].getsockname()[:2]
        try:
            with pytest.raises(HandshakeTimeoutError):
                await connect_and_handshake(
                    _client_config(registry, server, timeout_ms=200), f"{host}:{port}", _rng(9), registry
                )
        finally:
            listener.close()
            await listener.wait_closed()


class TestConfig:
    """地址与配置校验"""

    @pytest.mark.parametrize(
        "address,expected",
        [("127.0.0.1:4433", ("127.0.0.1", 4433)), ("[::1]:80", ("::1", 80)), ("localhost:0", ("localhost", 0))],
    )
    def test_parse_address(self, address, expected):
        assert parse_address(address) == expected

    @pytest.mark.parametrize("address", ["4433", ":4433", "host:port", "host:70000"])
    def test_parse_address_errors(self, address):
        with pytest.raises(ValueError):
            parse_address(address)

    def test_server_config_validation(self):
        with pytest.raises(ValidationError):
            ServerConfig(identity_seed=b"\x00" * 31)
        with pytest.raises(ValidationError):
            ServerConfig(listen="nowhere")
        with pytest.raises(ValidationError):
            ServerConfig(workers=0)
