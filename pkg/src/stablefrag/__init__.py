"""Fragmentation of conditioned stable Galton-Watson trees."""
