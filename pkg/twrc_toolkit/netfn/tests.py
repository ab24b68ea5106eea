"""Tests for relay functions and entropy checks."""

import numpy as np
import pytest
from django.core.exceptions import ValidationError

from ..packets import QPacket
from .functions import (
    NetFn,
    broadcast_exchange,
    builtin,
    load_netfn,
    random_netfn,
    recover_partner,
)
from .information import (
    check_conditions,
    conditional_entropy,
    entropy,
    joint_pmf,
    mutual_information,
    verify_identity_chain,
)


class TestQPacket:
    """Test cases for QPacket."""

    def test_modular_add(self):
        """Test symbol-wise addition wraps modulo q."""
        assert QPacket([2, 3], 4) + QPacket([3, 3], 4) == QPacket([1, 2], 4)

    def test_sequence_access(self):
        """Test length, indexing and iteration."""
        w = QPacket([0, 2, 1], 3)
        assert len(w) == 3
        assert w[1] == 2
        assert list(w) == [0, 2, 1]

    def test_symbols_read_only(self):
        """Test the symbol array cannot be mutated."""
        w = QPacket([0, 1], 2)
        with pytest.raises(ValueError):
            w.symbols[0] = 1

    def test_equality_includes_modulus(self):
        """Test equal symbols over different moduli differ."""
        assert QPacket([1, 1], 2) != QPacket([1, 1], 3)
        assert hash(QPacket([1, 0], 2)) == hash(QPacket([1, 0], 2))

    @pytest.mark.parametrize('symbols,q,code', [
        ([0, 2], 2, 'symbol_out_of_range'),
        ([-1], 3, 'symbol_out_of_range'),
        ([0], 1, 'invalid_modulus'),
    ])
    def test_invalid(self, symbols, q, code):
        """Test out-of-range symbols and moduli are rejected."""
        with pytest.raises(ValidationError) as exc_info:
            QPacket(symbols, q)
        assert exc_info.value.code == code

    def test_add_mismatch(self):
        """Test adding packets of different length or modulus raises."""
        with pytest.raises(ValidationError) as exc_info:
            QPacket([0, 1], 2) + QPacket([0], 2)
        assert exc_info.value.code == 'length_mismatch'
        with pytest.raises(ValidationError) as exc_info:
            QPacket([0], 2) + QPacket([0], 3)
        assert exc_info.value.code == 'modulus_mismatch'


class TestNetFn:
    """Test cases for NetFn tables."""

    def test_xor_eval(self):
        """Test bitwise XOR over q = 2."""
        f = builtin('xor', 2)
        w3 = f.eval(QPacket([0, 1, 1], 2), QPacket([1, 1, 0], 2))
        assert w3.tolist() == [1, 0, 1]

    def test_modq_add_eval(self):
        """Test modulo-4 addition."""
        f = builtin('modq-add', 4)
        assert f.eval(QPacket([2], 4), QPacket([3], 4)).tolist() == [1]

    def test_const_eval(self):
        """Test the constant function ignores its inputs."""
        f = builtin('const', 2)
        assert f.eval(QPacket([0, 1, 1], 2), QPacket([1, 0, 1], 2)).tolist() == [0, 0, 0]

    def test_int_sum_alphabet(self):
        """Test the integer sum needs 2q - 1 outputs."""
        f = builtin('int-sum', 3)
        assert f.m == 5
        assert f(2, 2) == 4

    def test_length_mismatch(self):
        """Test packets of different lengths are rejected."""
        with pytest.raises(ValidationError) as exc_info:
            builtin('xor', 2).eval(QPacket([0, 1], 2), QPacket([1], 2))
        assert exc_info.value.code == 'length_mismatch'

    def test_modulus_mismatch(self):
        """Test packets over the wrong ring are rejected."""
        with pytest.raises(ValidationError) as exc_info:
            builtin('modq-add', 4).eval(QPacket([0, 1], 2), QPacket([1, 1], 2))
        assert exc_info.value.code == 'modulus_mismatch'

    def test_entry_out_of_range(self):
        """Test table entries must fit the output alphabet."""
        with pytest.raises(ValidationError):
            NetFn([[0, 2], [1, 0]])

    def test_non_square_table(self):
        """Test tables must be q x q."""
        with pytest.raises(ValidationError):
            NetFn([[0, 1, 0], [1, 0, 1]])

    def test_xor_needs_power_of_two(self):
        """Test XOR is only offered for q a power of two."""
        with pytest.raises(ValidationError):
            builtin('xor', 3)

    def test_unknown_builtin(self):
        """Test unknown builtin names raise."""
        with pytest.raises(ValidationError):
            builtin('nand', 2)

    def test_relabel(self):
        """Test relabeling permutes rows and columns."""
        f = builtin('modq-add', 3)
        g = f.relabel(perm_w1=[2, 0, 1])
        assert g(0, 1) == f(2, 1)
        assert g(1, 1) == f(0, 1)


class TestTableFiles:
    """Test cases for loading and parsing table files."""

    def test_parse(self):
        """Test the q m header plus q rows."""
        f = NetFn.parse("2 2\n0 1\n1 0\n")
        assert f == builtin('xor', 2)

    def test_comments_and_blank_lines(self):
        """Test comments and blank lines are skipped."""
        f = NetFn.parse("# xor\n\n2 2\n0 1\n\n1 0\n")
        assert f.q == 2

    def test_roundtrip_text(self):
        """Test serializing then parsing gives the same table."""
        f = builtin('int-sum', 3)
        assert NetFn.parse(f.to_text()) == f

    def test_load_file(self, tmp_path):
        """Test loading from disk."""
        path = tmp_path / 'modq3.txt'
        path.write_text("3 3\n0 1 2\n1 2 0\n2 0 1\n")
        assert load_netfn(path) == builtin('modq-add', 3)

    @pytest.mark.parametrize('text', [
        '',
        '2\n0 1\n1 0\n',
        '2 2\n0 1\n',
        '2 2\n0 1\n1 x\n',
        '2 2\n0 1 1\n1 0 0\n',
    ])
    def test_malformed(self, text):
        """Test malformed files raise invalid_table."""
        with pytest.raises(ValidationError) as exc_info:
            NetFn.parse(text)
        assert exc_info.value.code == 'invalid_table'

    def test_missing_file(self, tmp_path):
        """Test a missing file raises invalid_table."""
        with pytest.raises(ValidationError):
            load_netfn(tmp_path / 'absent.txt')


class TestEntropy:
    """Test cases for entropy helpers."""

    def test_uniform(self):
        """Test uniform over four atoms is 2 bits."""
        assert entropy([0.25] * 4) == pytest.approx(2.0, abs=1e-12)

    def test_point_mass(self):
        """Test a point mass has zero entropy."""
        assert entropy([0, 1, 0]) == pytest.approx(0.0, abs=1e-12)

    def test_triangular(self):
        """Test (1/4, 1/2, 1/4) is 1.5 bits."""
        assert entropy([0.25, 0.5, 0.25]) == pytest.approx(1.5, abs=1e-12)

    def test_not_normalized(self):
        """Test non-normalized pmfs raise."""
        with pytest.raises(ValidationError) as exc_info:
            entropy([0.5, 0.6])
        assert exc_info.value.code == 'not_normalized'

    def test_negative_entry(self):
        """Test negative entries raise."""
        with pytest.raises(ValidationError):
            entropy([1.5, -0.5])

    def test_independent_pair(self):
        """Test independent variables have zero mutual information."""
        joint = np.outer([0.5, 0.5], [0.25, 0.75])
        assert mutual_information(joint, (0,), (1,)) == pytest.approx(0.0, abs=1e-12)
        assert conditional_entropy(joint, (0,), (1,)) == pytest.approx(1.0, abs=1e-12)

    def test_copy_pair(self):
        """Test a copied bit has 1 bit of mutual information."""
        joint = np.array([[0.5, 0.0], [0.0, 0.5]])
        assert mutual_information(joint, (0,), (1,)) == pytest.approx(1.0, abs=1e-12)
        assert conditional_entropy(joint, (0,), (1,)) == pytest.approx(0.0, abs=1e-12)

    def test_joint_pmf_shape(self):
        """Test the joint pmf covers q^2 atoms over the output alphabet."""
        joint = joint_pmf(builtin('int-sum', 2))
        assert joint.shape == (2, 2, 3)
        assert joint.sum() == pytest.approx(1.0)
        assert np.count_nonzero(joint) == 4


class TestCheckConditions:
    """Test cases for check_conditions."""

    def test_xor_valid(self):
        """Test XOR satisfies both conditions."""
        report = check_conditions(builtin('xor', 2))
        assert report.valid
        for value in (report.h_w2_given_w1w3, report.h_w1_given_w2w3, report.i_w3_w1, report.i_w3_w2):
            assert abs(value) < 1e-9

    @pytest.mark.parametrize('name,q', [('xor', 2), ('modq-add', 4)])
    def test_zero_entropies_are_positive_zero(self, name, q):
        """Test exact zeros carry no negative sign into reports."""
        report = check_conditions(builtin(name, q))
        assert np.copysign(1.0, report.h_w2_given_w1w3) == 1.0
        assert np.copysign(1.0, report.h_w1_given_w2w3) == 1.0
        assert format(report.h_w2_given_w1w3, '.6g') == '0'

    def test_int_sum_not_independent(self):
        """Test the integer sum is recoverable but leaks its inputs."""
        report = check_conditions(builtin('int-sum', 2))
        assert report.satisfies_recoverability
        assert not report.satisfies_independence
        assert not report.valid
        assert report.i_w3_w1 == pytest.approx(0.5, abs=1e-9)
        assert report.i_w3_w2 == pytest.approx(0.5, abs=1e-9)

    def test_const_not_recoverable(self):
        """Test a constant is independent but carries nothing."""
        report = check_conditions(builtin('const', 2))
        assert report.satisfies_independence
        assert not report.satisfies_recoverability
        assert report.h_w2_given_w1w3 == pytest.approx(1.0, abs=1e-9)
        assert report.i_w3_w1 == pytest.approx(0.0, abs=1e-9)
        assert report.i_w3_w2 == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize('q', range(2, 9))
    def test_modq_add_valid(self, q):
        """Test modulo-q addition is valid for every q."""
        report = check_conditions(builtin('modq-add', q))
        assert report.valid
        assert max(abs(report.h_w2_given_w1w3), abs(report.h_w1_given_w2w3),
                   abs(report.i_w3_w1), abs(report.i_w3_w2)) < 1e-9

    def test_relabel_preserves_validity(self, rng):
        """Test permuting input labels keeps a valid function valid."""
        f = builtin('modq-add', 5)
        for _ in range(20):
            g = f.relabel(rng.permutation(5), rng.permutation(5))
            assert check_conditions(g).valid

    def test_tol_must_be_positive(self):
        """Test a non-positive tolerance is rejected."""
        with pytest.raises(ValidationError):
            check_conditions(builtin('xor', 2), tol=0)

    def test_default_tol_from_settings(self, settings):
        """Test the tolerance comes from TWRC_ENTROPY_TOL."""
        settings.TWRC_ENTROPY_TOL = 1e-6
        assert check_conditions(builtin('xor', 2)).tol == 1e-6


class TestIdentityChain:
    """Test cases for verify_identity_chain."""

    def test_xor(self):
        """Test XOR residuals vanish."""
        chain, info = verify_identity_chain(builtin('xor', 2))
        assert chain == pytest.approx(0.0, abs=1e-12)
        assert info == pytest.approx(0.0, abs=1e-12)

    def test_const(self):
        """Test the constant table residuals vanish."""
        assert max(verify_identity_chain(builtin('const', 3))) <= 1e-9

    @pytest.mark.parametrize('q', [2, 3, 4])
    def test_random_tables(self, q):
        """Test residuals over 100 seeded random tables."""
        rng = np.random.default_rng(1000 + q)
        for _ in range(100):
            assert max(verify_identity_chain(random_netfn(q, rng))) <= 1e-9

    def test_wide_output_alphabet(self, rng):
        """Test residuals when the output alphabet exceeds q."""
        for _ in range(20):
            assert max(verify_identity_chain(random_netfn(3, rng, m=7))) <= 1e-9


class TestBroadcastExchange:
    """Test cases for recovering the partner's message."""

    def test_modq_add_exchange(self, rng):
        """Test both ends recover the partner over modulo-q addition."""
        f = builtin('modq-add', 5)
        w1 = QPacket.random(5, 32, rng)
        w2 = QPacket.random(5, 32, rng)
        at_n1, at_n2 = broadcast_exchange(f, w1, w2)
        assert at_n1 == w2
        assert at_n2 == w1

    def test_int_sum_recoverable(self):
        """Test the integer sum is invertible with side information."""
        f = builtin('int-sum', 2)
        w1, w2 = QPacket([0, 1, 1, 0], 2), QPacket([1, 1, 0, 0], 2)
        assert broadcast_exchange(f, w1, w2) == (w2, w1)

    def test_const_not_recoverable(self):
        """Test the constant function cannot be inverted."""
        f = builtin('const', 2)
        w3 = f.eval(QPacket([0, 1], 2), QPacket([1, 0], 2))
        with pytest.raises(ValidationError) as exc_info:
            recover_partner(f, w3, QPacket([0, 1], 2))
        assert exc_info.value.code == 'not_recoverable'
