"""init unit tests."""
