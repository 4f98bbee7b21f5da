"""init integration tests."""
