"""
Test suite for manifold-rectify

Test Structure:
- tests/utils/ - Tests for the utilities package (data, geometry, cleaning, baselines, evaluation, config, report)
- tests/reports/ - Tests for the benchmark harness and theory experiments
- tests/cli/ - Click command tests with CliRunner
- tests/fixtures/ - Shared config and CSV fixtures

Run tests with:
    pytest
    pytest -v                    # Verbose output
    pytest -m "not slow"         # Skip long-running acceptance checks
    pytest tests/utils/          # Test specific module
"""
