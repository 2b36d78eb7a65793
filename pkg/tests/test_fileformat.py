import pytest
from hypothesis import given, strategies as st

from qhibe import fileformat
from qhibe.anonymizer import AnonCiphertext
from qhibe.cocks import IdentityKey
from qhibe.errors import FormatError
from qhibe.numtheory import MasterSecret, PublicParams
from qhibe.qring import RingElement
from qhibe.xhibe import Ciphertext

nat = st.integers(min_value=0, max_value=2**1100)
ring = st.builds(RingElement, nat, nat)
ciphertexts = st.builds(Ciphertext, ring, ring, nat)
keys = st.builds(IdentityKey, st.binary(max_size=40), nat)


@st.composite
def anon(draw):
    m = draw(st.integers(0, 6))
    return AnonCiphertext(draw(ring), tuple(draw(ring) for _ in range(m)),
                          draw(ring), tuple(draw(ring) for _ in range(m)))


@given(st.one_of(ciphertexts, keys, anon()))
def test_round_trip(obj):
    text = fileformat.dumps(obj)
    assert text.isascii()
    assert fileformat.loads(text) == obj


def test_params_and_master_round_trip(big):
    pp, msk = big
    assert fileformat.loads(fileformat.dumps(pp), "params") == pp
    assert fileformat.loads(fileformat.dumps(msk), "master") == msk


def test_layout():
    text = fileformat.dumps(Ciphertext(RingElement(19, 2), RingElement(0, 255), 4))
    assert text == "QHIBE1 ciphertext\na = 4\nc.0 = 13\nc.1 = 2\nd.0 = 0\nd.1 = ff\n"
    assert fileformat.dumps(IdentityKey(b"alice", 9)) == "QHIBE1 key\nid = 616c696365\nr = 9\n"
    assert fileformat.dumps(PublicParams(77, 4)) == "QHIBE1 params\nn = 4d\nbits = 4\nhash = sha256\n"


@pytest.mark.parametrize("text", [
    "",
    "QHIBE2 key\nid = 00\nr = 9\n",
    "XYZ key\n",
    "QHIBE1 widget\n",
    "QHIBE1 key\nid = 00\nr = 09\n",      # leading zero
    "QHIBE1 key\nid = 00\nr = 9F\n",      # upper case
    "QHIBE1 key\nid = 0\nr = 9\n",        # odd-length bytes
    "QHIBE1 key\nid = 00\n",              # missing field
    "QHIBE1 key\nid = 00\nr = 9\nx = 1\n",  # extra field
    "QHIBE1 key\nid = 00\nr = 9\nr = 9\n",  # duplicate
    "QHIBE1 key\nid 00\nr = 9\n",
    "QHIBE1 params\nn = 4d\nbits = 4\nhash = md5\n",
    "QHIBE1 master\np = 7\nq = 7\n",
])
def test_rejects(text):
    with pytest.raises(FormatError):
        fileformat.loads(text)


def test_expect_kind():
    with pytest.raises(FormatError):
        fileformat.loads(fileformat.dumps(IdentityKey(b"x", 1)), "params")


def test_files(tmp_path):
    key = IdentityKey(b"\xff\x00", 12345)
    fileformat.write(tmp_path / "k", key)
    assert fileformat.read(tmp_path / "k", "key") == key
    assert MasterSecret(7, 11) == fileformat.loads("QHIBE1 master\np = 7\nq = b\n")
