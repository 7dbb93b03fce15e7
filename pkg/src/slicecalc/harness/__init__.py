"""Catalog, grids, batch runner and reports."""
