from unittest.mock import patch

import pytest

import job_config
from job_config import ConfigError, JobConfig, load_config


@pytest.fixture
def write_job(tmp_path):
    """Writes a key=value job file and returns its path."""

    def write(text):
        path = tmp_path / "job.env"
        path.write_text(text)
        return str(path)

    return write


class TestLoadConfig:
    """Tests for reading and validating jobs."""

    def test_flags_only(self):
        """Test a job from command-line values with defaults filled in."""
        # Execute
        config = load_config(overrides={"p": 7, "n": 3, "unit_exp": None})

        # Assert
        assert config.context.p == 7
        assert config.context.f == 1
        assert config.context.n == 3
        assert config.character.unit_exp == 0
        assert config.decomposition == "standard"
        assert config.m is None

    def test_file_values_are_coerced(self, write_job):
        """Test strings from the file become integers and the modulus a list."""
        # Setup
        path = write_job("p=3\nf=2\nn=2\nmodulus=1,0,1\nunit_exp=1\npsi_val=1\n")

        # Execute
        config = load_config(path)

        # Assert
        assert config.context.modulus_coeffs == [1, 0, 1]
        assert config.character.unit_exp == 1
        assert config.psi.val == 1

    def test_flags_override_file(self, write_job):
        """Test command-line values win over the file."""
        # Setup
        path = write_job("p=5\nn=2\ndecomposition=swapped\n")

        # Execute
        config = load_config(path, {"p": 7, "n": 3, "decomposition": None})

        # Assert
        assert (config.context.p, config.context.n) == (7, 3)
        assert config.decomposition == "swapped"

    def test_unknown_key(self, write_job):
        """Test a key the job format does not know."""
        # Setup
        path = write_job("p=7\ncolour=blue\n")

        # Execute / Assert
        with pytest.raises(ConfigError, match="unknown config keys"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """Test a path that does not exist."""
        # Execute / Assert
        with pytest.raises(ConfigError, match="missing or empty"):
            load_config(str(tmp_path / "absent.env"))

    def test_p_required(self):
        """Test a job without p."""
        # Execute / Assert
        with pytest.raises(ConfigError, match="p is required"):
            load_config(overrides={"n": 3})

    @pytest.mark.parametrize("overrides, message", [
        ({"p": 9}, "odd prime"),
        ({"p": 2}, "odd prime"),
        ({"p": 7, "n": 5}, "must divide"),
        ({"p": 13, "n": 4}, "divisible by 4"),
        ({"p": 7, "n": 3, "varpi_num": 1, "varpi_den": 5}, "varpi_den=5"),
        ({"p": 7, "n": 3, "k": 3}, "must index K-bar"),
        ({"p": 7, "n": 3, "decomposition": "diagonal"}, "decomposition"),
        ({"p": 7, "n": 3, "m": 0}, "greater than or equal to 1"),
    ])
    def test_rejected(self, overrides, message):
        """Test values outside the tame model are rejected with a readable message."""
        # Execute / Assert
        with pytest.raises(ConfigError, match=message):
            load_config(overrides=overrides)

    def test_rejection_is_logged(self):
        """Test a rejected job is reported through the logger."""
        # Execute
        with patch.object(job_config.logger, "error") as error:
            with pytest.raises(ConfigError):
                load_config(overrides={"p": 7, "n": 5})

        # Assert
        error.assert_called_once()
        assert "context" in error.call_args[0][0]


class TestBuilders:
    """Tests for turning a job into engine objects."""

    def test_build_everything(self):
        """Test the context, character, psi and decomposition of one job."""
        # Setup
        config = JobConfig.model_validate({
            "context": {"p": 7, "n": 3},
            "character": {"unit_exp": 2, "varpi_num": 1, "varpi_den": 3},
            "psi": {"val": 1},
            "decomposition": "swapped",
        })

        # Execute
        ctx = config.build_context()
        data = config.build_data(ctx)
        decomposition = config.build_decomposition(ctx)

        # Assert
        assert ctx.describe()["N"] == 168
        assert (data.chi.unit_exp, data.chi.varpi_exp) == (2, 56)
        assert data.psi.conductor == -1
        assert decomposition.name == "swapped"

    def test_modulus_reaches_the_residue_field(self):
        """Test an explicit modulus for F_9."""
        # Setup
        config = load_config(overrides={"p": 3, "f": 2, "n": 2, "modulus": "2,2,1"})

        # Execute
        ctx = config.build_context()

        # Assert
        assert ctx.tame.modulus == (2, 2, 1)
