"""Command-line interface for manifold-rectify."""
