#pragma once

#include <vector>

#include "varimesh/mesh_io.hpp"
#include "varimesh/partition.hpp"

namespace varimesh {

struct ExtractionDiagnostics {
  int degenerate_clusters = 0;  // boundary yielded < 3 anchors; vertices were promoted
  int extra_loops = 0;          // clusters with more than one boundary loop
};

/// Polygonal approximation of a cleaned partition: one plane proxy per
/// cluster, anchor vertices where >= 3 clusters meet (>= 2 on the open mesh
/// boundary, plus boundary corners), one anchor-cycle polygon per cluster.
struct PolygonalExtraction {
  PolygonalMesh mesh;
  std::vector<PlaneProxy> proxies;      // per cluster
  std::vector<Vec3> cluster_centroids;  // per cluster, from the moments
  std::vector<int> anchor_source;      // original vertex id per anchor
  ExtractionDiagnostics diagnostics;
};

/// Converts a cleaned partition into a polygonal mesh. Anchor positions are
/// the mean of the source vertex's orthogonal projections onto all incident
/// cluster proxies. Polygons follow each cluster's boundary loop in the
/// orientation of the input mesh. Clusters whose boundary has fewer than
/// three anchors get extra anchors at the most spread-out boundary vertices
/// (reported in diagnostics). `boundary_corner_deg` is the open-boundary
/// turn angle above which a boundary vertex becomes an anchor.
PolygonalExtraction extract_polygonal(const TriangleMesh& mesh, const FaceAdjacency& adj,
                                      const Partition& partition,
                                      double boundary_corner_deg = 60.0);

struct CdtResult {
  TriangleMesh mesh;
  int fan_fallbacks = 0;  // polygons whose projection was not ear-clippable
};

/// Triangulates each polygon in the plane of its cluster proxy: ear clipping
/// followed by Delaunay edge flips on the interior diagonals; the polygon
/// edges are constrained and never flipped. Polygons whose projection is not
/// a simple polygon fall back to a fan from the anchor closest to the cluster
/// centroid.
CdtResult cdt_triangulate(const PolygonalExtraction& extraction);

/// Same, but derives each polygon's projection plane from the polygon itself
/// (Newell normal through the vertex mean). For standalone polygonal meshes.
CdtResult cdt_triangulate(const PolygonalMesh& poly);

}  // namespace varimesh
