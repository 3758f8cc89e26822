"""Input resolution package."""
