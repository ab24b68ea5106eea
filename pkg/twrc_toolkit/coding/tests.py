"""Tests for ring-linear codes and the coded PNC chain."""

import itertools

import numpy as np
import pytest
from django.core.exceptions import ValidationError

from ..packets import QPacket
from ..phy import NoiseModel, PamScheme, ser_pnc_analytic
from .chain import ChainResult, pnc_chain_batch, pnc_chain_trial
from .codes import (
    CodebookTooLarge,
    RingLinearCode,
    decode_nearest,
    encode,
    make_code,
    parse_code_spec,
)


def all_messages(q, k):
    return [QPacket(m, q) for m in itertools.product(range(q), repeat=k)]


class TestMakeCode:
    """Test cases for make_code."""

    def test_repetition(self):
        """Test a binary repetition code of length 3."""
        code = make_code('repetition', 2, l=3)
        assert (code.k, code.l) == (1, 3)
        assert encode(code, QPacket([1], 2)).tolist() == [1, 1, 1]
        assert encode(code, QPacket([0], 2)).tolist() == [0, 0, 0]

    def test_spc_quaternary(self):
        """Test the parity symbol is minus the message sum mod 4."""
        code = make_code('single_parity_check', 4, k=2)
        assert encode(code, QPacket([2, 3], 4)).tolist() == [2, 3, 3]
        assert encode(code, QPacket([0, 0], 4)).tolist() == [0, 0, 0]

    def test_spc_binary(self):
        """Test a binary single-parity-check codeword."""
        code = make_code('single_parity_check', 2, k=3)
        assert encode(code, QPacket([1, 0, 1], 2)).tolist() == [1, 0, 1, 0]

    @pytest.mark.parametrize('q,k', [(2, 3), (3, 2), (4, 2), (5, 1)])
    def test_spc_codewords_sum_to_zero(self, q, k):
        """Test every codeword of an SPC code sums to 0 mod q."""
        code = make_code('single_parity_check', q, k=k)
        assert np.all(code.codebook.sum(axis=1) % q == 0)

    @pytest.mark.parametrize('kwargs', [
        {'kind': 'repetition', 'q': 2},
        {'kind': 'repetition', 'q': 2, 'l': 3, 'k': 2},
        {'kind': 'single_parity_check', 'q': 2},
        {'kind': 'single_parity_check', 'q': 2, 'k': 2, 'l': 4},
        {'kind': 'ldpc', 'q': 2, 'k': 2},
        {'kind': 'repetition', 'q': 1, 'l': 3},
    ])
    def test_invalid(self, kwargs):
        """Test invalid dimensions and kinds raise."""
        with pytest.raises(ValidationError) as exc_info:
            make_code(**kwargs)
        assert exc_info.value.code == 'invalid_code'


class TestRingLinearCode:
    """Test cases for RingLinearCode."""

    def test_requires_identity_block(self):
        """Test a generator without a systematic block is rejected."""
        with pytest.raises(ValidationError):
            RingLinearCode(2, [[1, 1], [1, 1]])

    def test_identity_block_anywhere(self):
        """Test the identity columns may appear in any position."""
        code = RingLinearCode(3, [[2, 1, 0], [1, 0, 1]])
        assert (code.k, code.l) == (2, 3)

    def test_entries_in_range(self):
        """Test generator entries outside Z_q are rejected."""
        with pytest.raises(ValidationError):
            RingLinearCode(2, [[1, 2]])

    def test_codebook_order(self):
        """Test the codebook follows lexicographic message order."""
        code = make_code('single_parity_check', 2, k=2)
        assert code.messages.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
        assert code.codebook.tolist() == [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]

    def test_codewords_distinct(self):
        """Test distinct messages map to distinct codewords."""
        code = make_code('single_parity_check', 3, k=3)
        assert len({tuple(row) for row in code.codebook.tolist()}) == 27

    def test_parse_code_spec(self):
        """Test the short code specs."""
        assert parse_code_spec('rep:5', 2) == make_code('repetition', 2, l=5)
        assert parse_code_spec('spc:2', 4) == make_code('single_parity_check', 4, k=2)

    @pytest.mark.parametrize('spec', ['rep', 'rep:x', 'ldpc:3', '', 'spc:0'])
    def test_parse_code_spec_invalid(self, spec):
        """Test malformed code specs raise."""
        with pytest.raises(ValidationError):
            parse_code_spec(spec, 2)


class TestLinearity:
    """Test encoding commutes with modulo-q addition."""

    def test_spc_exhaustive(self):
        """Test all 256 message pairs of the quaternary SPC code."""
        code = make_code('single_parity_check', 4, k=2)
        messages = all_messages(4, 2)
        for a, b in itertools.product(messages, repeat=2):
            assert encode(code, a) + encode(code, b) == encode(code, a + b)

    @pytest.mark.parametrize('q,l', [(2, 3), (3, 5), (5, 4), (8, 2)])
    def test_repetition_exhaustive(self, q, l):
        """Test all message pairs of repetition codes."""
        code = make_code('repetition', q, l=l)
        messages = all_messages(q, 1)
        for a, b in itertools.product(messages, repeat=2):
            assert encode(code, a) + encode(code, b) == encode(code, a + b)

    def test_random_pairs(self, rng):
        """Test 1000 random pairs of a larger code."""
        code = make_code('single_parity_check', 7, k=6)
        for _ in range(1000):
            a = QPacket.random(7, 6, rng)
            b = QPacket.random(7, 6, rng)
            assert encode(code, a) + encode(code, b) == encode(code, a + b)

    def test_encode_mismatch(self):
        """Test encoding rejects wrong lengths and moduli."""
        code = make_code('single_parity_check', 4, k=2)
        with pytest.raises(ValidationError):
            encode(code, QPacket([1, 2, 3], 4))
        with pytest.raises(ValidationError):
            encode(code, QPacket([1, 0], 2))


class TestDecodeNearest:
    """Test cases for decode_nearest."""

    def test_majority(self):
        """Test repetition decoding is a majority vote."""
        code = make_code('repetition', 2, l=3)
        assert decode_nearest(code, QPacket([1, 0, 1], 2)).tolist() == [1]
        assert decode_nearest(code, QPacket([0, 0, 1], 2)).tolist() == [0]

    def test_tie_breaks_lexicographically(self):
        """Test three equidistant codewords resolve to the smallest message."""
        code = make_code('single_parity_check', 2, k=2)
        assert decode_nearest(code, QPacket([1, 1, 1], 2)).tolist() == [0, 1]

    @pytest.mark.parametrize('kind,q,size', [
        ('single_parity_check', 4, 2),
        ('single_parity_check', 3, 3),
        ('repetition', 5, 4),
    ])
    def test_round_trip_exhaustive(self, kind, q, size):
        """Test every codeword decodes back to its message."""
        code = make_code(kind, q, k=size) if kind == 'single_parity_check' else make_code(kind, q, l=size)
        for w in all_messages(q, code.k):
            assert decode_nearest(code, encode(code, w)) == w

    def test_batch(self):
        """Test array input decodes row by row."""
        code = make_code('repetition', 3, l=3)
        decoded = decode_nearest(code, np.array([[2, 2, 0], [1, 0, 1], [0, 1, 2]]))
        assert decoded.tolist() == [[2], [1], [0]]

    def test_batch_chunking(self, settings):
        """Test results do not depend on the decode chunk size."""
        code = make_code('single_parity_check', 3, k=2)
        words = np.random.default_rng(4).integers(0, 3, size=(500, 3))
        whole = decode_nearest(code, words)
        settings.TWRC_DECODE_CHUNK = 1
        assert np.array_equal(decode_nearest(code, words), whole)

    def test_wrong_length(self):
        """Test words of the wrong length raise."""
        code = make_code('repetition', 2, l=3)
        with pytest.raises(ValidationError):
            decode_nearest(code, QPacket([1, 0], 2))
        with pytest.raises(ValidationError):
            decode_nearest(code, np.zeros((4, 2), dtype=int))

    def test_codebook_too_large(self, settings):
        """Test enumeration past the bound is a capability error."""
        settings.TWRC_MAX_CODEBOOK = 64
        code = make_code('single_parity_check', 4, k=4)
        with pytest.raises(CodebookTooLarge) as exc_info:
            decode_nearest(code, QPacket([0] * 5, 4))
        assert exc_info.value.code == 'codebook_too_large'

    def test_codebook_too_large_is_validation_error(self, settings):
        """Test callers catching ValidationError also catch the capability error."""
        settings.TWRC_MAX_CODEBOOK = 2
        with pytest.raises(ValidationError):
            make_code('repetition', 3, l=2).codebook


class TestPncChain:
    """Test cases for the coded PNC chain."""

    @pytest.mark.parametrize('kind,q,size', [
        ('single_parity_check', 2, 2),
        ('single_parity_check', 3, 2),
        ('repetition', 4, 3),
    ])
    def test_noiseless_exhaustive(self, kind, q, size):
        """Test the noiseless chain recovers w1 + w2 for every message pair."""
        code = make_code(kind, q, k=size) if kind == 'single_parity_check' else make_code(kind, q, l=size)
        scheme = PamScheme.from_snr_db(q, 0)
        nm = NoiseModel.noiseless()
        for w1, w2 in itertools.product(all_messages(q, code.k), repeat=2):
            result = pnc_chain_trial(code, scheme, w1, w2, nm)
            assert not result.packet_error
            assert result.symbol_errors == 0
            assert result.decoded == w1 + w2

    def test_result_fields(self):
        """Test the result describes the decoded and true sums."""
        code = make_code('repetition', 2, l=3)
        result = pnc_chain_trial(code, PamScheme(2, 1.0), QPacket([1], 2), QPacket([1], 2), NoiseModel(seed=11))
        assert isinstance(result, ChainResult)
        assert result.truth.tolist() == [0]
        assert result.packet_error == (result.decoded != result.truth)
        assert result.to_dict()['truth'] == [0]

    def test_trial_reproducible(self):
        """Test the same noise seed gives the same result."""
        code = make_code('single_parity_check', 4, k=2)
        scheme = PamScheme.from_snr_db(4, 3)
        w1, w2 = QPacket([1, 2], 4), QPacket([3, 3], 4)
        assert pnc_chain_trial(code, scheme, w1, w2, NoiseModel(seed=5)) == \
            pnc_chain_trial(code, scheme, w1, w2, NoiseModel(seed=5))

    def test_scheme_mismatch(self):
        """Test the code and the PAM scheme must share q."""
        code = make_code('repetition', 2, l=3)
        with pytest.raises(ValidationError):
            pnc_chain_trial(code, PamScheme(4, 1.0), QPacket([1], 2), QPacket([0], 2), NoiseModel())

    def test_batch_shapes(self, rng):
        """Test the batch returns one entry per trial."""
        code = make_code('single_parity_check', 3, k=2)
        w1 = rng.integers(0, 3, size=(100, 2))
        w2 = rng.integers(0, 3, size=(100, 2))
        symbol_errors, packet_errors, decoded = pnc_chain_batch(code, PamScheme(3, 1.0), w1, w2, rng)
        assert symbol_errors.shape == (100,)
        assert packet_errors.dtype == bool
        assert decoded.shape == (100, 2)
        assert np.array_equal(packet_errors, symbol_errors > 0)

    def test_repetition_beats_uncoded(self):
        """Test repetition l = 5 at 10 dB errs less often than an uncoded PNC symbol."""
        code = make_code('repetition', 2, l=5)
        scheme = PamScheme.from_snr_db(2, 10)
        rng = np.random.default_rng(2024)
        n = 100000
        w1 = rng.integers(0, 2, size=(n, 1))
        w2 = rng.integers(0, 2, size=(n, 1))
        _, packet_errors, _ = pnc_chain_batch(code, scheme, w1, w2, rng)
        assert packet_errors.mean() < ser_pnc_analytic(scheme)
