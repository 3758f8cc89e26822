"""Report rendering package."""
