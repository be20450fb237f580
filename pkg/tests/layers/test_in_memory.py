import asyncio
import threading

import numpy as np
import pytest
from lv_waves.exceptions import ChannelFull
from lv_waves.layers import (
    InMemorySnapshotLayer,
    get_snapshot_layer,
    register_snapshot_layer,
)


@pytest.mark.asyncio
async def test_send_receive():
    """
    Makes sure we can send a message to a normal channel then receive it.
    """
    layer = get_snapshot_layer("inmemory")

    await layer.send("test-channel-1", {"type": "snapshot.fields", "t": 1.0})
    await layer.send("test-channel-1", {"type": "snapshot.fields", "t": 2.0})
    message = await layer.receive("test-channel-1")
    assert message["type"] == "snapshot.fields"
    assert message["t"] == 1.0
    message = await layer.receive("test-channel-1")
    assert message["t"] == 2.0
    assert layer.pending["test-channel-1"] == 0


@pytest.mark.asyncio
async def test_race_empty():
    """
    Makes sure a receive waiting on an empty channel gets the next message.
    """
    layer = InMemorySnapshotLayer()

    receive_task = asyncio.create_task(layer.receive("test-channel-1"))
    await asyncio.sleep(0.1)
    await layer.send("test-channel-1", {"type": "snapshot.fields", "t": 0.5})
    async with asyncio.timeout(1):
        message = await receive_task
    assert message["t"] == 0.5


def test_send_nowait_capacity():
    """
    Makes sure we get ChannelFull when we hit the send capacity
    """
    register_snapshot_layer("inmemory-limit", InMemorySnapshotLayer(capacity=3))
    layer = get_snapshot_layer("inmemory-limit")

    layer.send_nowait("test-channel-1", {"type": "snapshot.fields"})
    layer.send_nowait("test-channel-1", {"type": "snapshot.fields"})
    layer.send_nowait("test-channel-1", {"type": "snapshot.fields"})
    with pytest.raises(ChannelFull):
        layer.send_nowait("test-channel-1", {"type": "snapshot.fields"})


@pytest.mark.asyncio
async def test_send_waits_for_room():
    layer = InMemorySnapshotLayer(capacity=1)
    layer.retry_interval = 0.001
    await layer.send("test-channel-1", {"type": "snapshot.fields"})
    blocked = asyncio.create_task(layer.send("test-channel-1", {"type": "simulation.complete"}))
    await asyncio.sleep(0.01)
    assert not blocked.done()
    assert (await layer.receive("test-channel-1"))["type"] == "snapshot.fields"
    async with asyncio.timeout(1):
        await blocked
    assert (await layer.receive("test-channel-1"))["type"] == "simulation.complete"


@pytest.mark.asyncio
async def test_messages_are_copied():
    layer = InMemorySnapshotLayer()
    u = np.zeros(3)
    await layer.send("test-channel-1", {"type": "snapshot.fields", "u": u})
    u[0] = 1.0
    message = await layer.receive("test-channel-1")
    assert message["u"][0] == 0.0


@pytest.mark.asyncio
async def test_send_from_worker_thread():
    """
    Tests hand-off from a thread that does not own the event loop.
    """
    layer = InMemorySnapshotLayer()
    layer.bind_loop()
    channel = await layer.new_channel()

    def produce():
        for k in range(5):
            layer.send_nowait(channel, {"type": "snapshot.fields", "t": float(k)})

    thread = threading.Thread(target=produce)
    thread.start()
    async with asyncio.timeout(2):
        times = [(await layer.receive(channel))["t"] for _ in range(5)]
    thread.join()
    assert times == [0.0, 1.0, 2.0, 3.0, 4.0]


@pytest.mark.asyncio
async def test_multi_send_receive():
    """
    Tests overlapping sends and receives, and ordering.
    """
    layer = InMemorySnapshotLayer()

    await layer.send("test-channel-3", {"type": "message.1"})
    await layer.send("test-channel-3", {"type": "message.2"})
    await layer.send("test-channel-3", {"type": "message.3"})
    assert (await layer.receive("test-channel-3"))["type"] == "message.1"
    assert (await layer.receive("test-channel-3"))["type"] == "message.2"
    assert (await layer.receive("test-channel-3"))["type"] == "message.3"


@pytest.mark.asyncio
async def test_new_channel_names():
    layer = InMemorySnapshotLayer()
    name = await layer.new_channel()
    assert name.startswith("snapshots.inmemory!")
    assert layer.require_valid_channel_name(name)
    assert name != await layer.new_channel()


@pytest.mark.asyncio
async def test_discard():
    layer = InMemorySnapshotLayer()
    await layer.send("test-channel-1", {"type": "message.1"})
    await layer.send("test-channel-2", {"type": "message.2"})
    layer.discard("test-channel-1")
    layer.discard("never-used")
    assert set(layer.channels) == {"test-channel-2"}
    assert layer.pending == {"test-channel-2": 1}
