from ._fracscat import (
    Problem,
    geometries,
    geometry_info,
    mesh_sizes,
    prefractal_count,
)

__all__ = ["Problem", "geometries", "geometry_info", "mesh_sizes", "prefractal_count"]
