"""Unit tests for choice scripts."""

import pytest

from app.core.constants import ChoiceLabel
from app.domain.exceptions import ScriptExhausted
from app.models.choice_model import ChoiceScript, ExhaustionPolicy


class TestChoiceScript:
    """Test suite for ChoiceScript."""

    def test_fixed_values_in_order(self):
        """Test scripted values are consumed left to right."""
        script = ChoiceScript.fixed([3, 1, 4])
        assert [script.next(), script.next(), script.next()] == [3, 1, 4]
        assert script.position == 3
        assert script.consumed == [3, 1, 4]

    def test_fixed_script_exhaustion(self):
        """Test the fail-test policy raises past the end."""
        script = ChoiceScript.fixed([7])
        script.next()
        with pytest.raises(ScriptExhausted) as exc_info:
            script.next(ChoiceLabel.VALUE.value)
        assert exc_info.value.consumed == 1
        assert exc_info.value.error_code == "SCRIPT_EXHAUSTED"

    def test_seeded_script_prefers_scripted_values(self):
        """Test a seeded script replays its values before drawing."""
        script = ChoiceScript.seeded(5, [10, 20])
        assert script.policy is ExhaustionPolicy.RANDOM
        assert script.next() == 10
        assert script.next() == 20
        script.next()
        assert script.position == 3

    def test_seeded_script_is_deterministic(self):
        """Test the same seed draws the same values."""
        first = ChoiceScript.seeded("3:1")
        second = ChoiceScript.seeded("3:1")
        labels = [ChoiceLabel.ADDRESS.value, ChoiceLabel.VALUE.value, ChoiceLabel.BRANCH.value] * 5
        assert [first.next(label) for label in labels] == [second.next(label) for label in labels]

    def test_draw_ranges_by_label(self):
        """Test addresses are positive and values stay in the configured range."""
        script = ChoiceScript(policy=ExhaustionPolicy.RANDOM, seed=11, min_value=-3, max_value=3, max_address=50)
        for _ in range(200):
            assert 1 <= script.next(ChoiceLabel.ADDRESS.value) <= 50
            assert -3 <= script.next(ChoiceLabel.VALUE.value) <= 3
            assert script.next(ChoiceLabel.BRANCH.value) in (0, 1)

    def test_next_bool(self):
        """Test boolean choices read any non-zero value as true."""
        script = ChoiceScript.fixed([0, 5])
        assert script.next_bool() is False
        assert script.next_bool() is True
