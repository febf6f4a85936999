"""TNSR binary format: layout, round trips, and malformed-file errors."""

import struct

import numpy as np
import pytest

from brokeneyes.errors import (
    NotFoundError,
    TensorDataError,
    TensorFormatError,
    TensorTruncationError,
)
from brokeneyes.tensorio import read_tensor, write_tensor


def test_exact_byte_layout_smallest_tensor(tmp_path):
    path = tmp_path / "one.tnsr"
    write_tensor(np.ones((1, 1, 1), np.float32), path)
    data = path.read_bytes()
    # magic, version, ndim, dims (1,1,1), dtype code, then one float32
    assert data[:4] == b"TNSR"
    assert struct.unpack("<6I", data[4:28]) == (1, 3, 1, 1, 1, 1)
    assert data[28:] == b"\x00\x00\x80\x3f"
    assert len(data) == 32


def test_round_trip_bit_exact(tmp_path):
    rs = np.random.RandomState(0)
    for i in range(20):
        shape = tuple(rs.randint(1, 9, size=3))
        t = rs.standard_normal(shape).astype(np.float32)
        path = tmp_path / f"t{i}.tnsr"
        write_tensor(t, path)
        back = read_tensor(path)
        assert back.dtype == np.float32
        assert back.shape == t.shape
        assert np.array_equal(back.view(np.uint32), t.view(np.uint32))


def test_wrong_magic(tmp_path):
    path = tmp_path / "bad.tnsr"
    path.write_bytes(b"XXXX" + b"\x00" * 28)
    with pytest.raises(TensorFormatError):
        read_tensor(path)


def test_truncated_payload(tmp_path):
    path = tmp_path / "trunc.tnsr"
    write_tensor(np.ones((2, 3, 4), np.float32), path)
    data = path.read_bytes()
    path.write_bytes(data[:-8])
    with pytest.raises(TensorTruncationError):
        read_tensor(path)


def test_oversized_payload(tmp_path):
    path = tmp_path / "extra.tnsr"
    write_tensor(np.ones((1, 2, 2), np.float32), path)
    path.write_bytes(path.read_bytes() + b"\x00\x00\x00\x00")
    with pytest.raises(TensorTruncationError):
        read_tensor(path)


def test_truncated_header(tmp_path):
    path = tmp_path / "short.tnsr"
    path.write_bytes(b"TNSR\x01\x00\x00\x00")
    with pytest.raises(TensorTruncationError):
        read_tensor(path)


def test_non_finite_payload_rejected(tmp_path):
    path = tmp_path / "nan.tnsr"
    t = np.ones((1, 1, 2), np.float32)
    write_tensor(t, path)
    data = bytearray(path.read_bytes())
    data[28:32] = struct.pack("<f", float("nan"))
    path.write_bytes(bytes(data))
    with pytest.raises(TensorDataError):
        read_tensor(path)


def test_write_rejects_non_finite():
    with pytest.raises(TensorDataError):
        write_tensor(np.array([[[np.inf]]], np.float32), "/tmp/never-written.tnsr")


def test_unsupported_version(tmp_path):
    path = tmp_path / "v2.tnsr"
    write_tensor(np.ones((1, 1, 1), np.float32), path)
    data = bytearray(path.read_bytes())
    data[4:8] = struct.pack("<I", 2)
    path.write_bytes(bytes(data))
    with pytest.raises(TensorFormatError):
        read_tensor(path)


def test_unsupported_dtype_code(tmp_path):
    path = tmp_path / "dt.tnsr"
    write_tensor(np.ones((1, 1, 1), np.float32), path)
    data = bytearray(path.read_bytes())
    data[24:28] = struct.pack("<I", 7)
    path.write_bytes(bytes(data))
    with pytest.raises(TensorFormatError):
        read_tensor(path)


def test_missing_file():
    with pytest.raises(NotFoundError):
        read_tensor("/tmp/definitely-not-here.tnsr")


def test_write_rejects_wrong_rank(tmp_path):
    with pytest.raises(TensorFormatError):
        write_tensor(np.ones((2, 2), np.float32), tmp_path / "r2.tnsr")
