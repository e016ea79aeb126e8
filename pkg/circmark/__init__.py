"""Blind image watermarking with circulant blocks in the singular values."""
