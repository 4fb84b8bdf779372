#include "varimesh/swap.hpp"

#include "varimesh/mesh.hpp"

namespace varimesh {

SwapResult optimize(Partition& partition, const FaceAdjacency& adj,
                    const std::vector<TriangleMoments>& face_moments, const EnergyParams& params,
                    const SwapSchedule& schedule, const SwapObserver& observer) {
  const int nf = partition.face_count();
  auto& f2c = partition.face_to_cluster;
  auto& clusters = partition.clusters;

  std::vector<double> energy(clusters.size());
  double total = 0.0;
  for (size_t c = 0; c < clusters.size(); ++c) {
    energy[c] = cluster_energy(clusters[c], params);
    total += energy[c];
  }

  SwapResult result;
  result.energy_trace.push_back(total);

  for (int pass = 0; pass < schedule.max_iterations; ++pass) {
    const double eps = schedule.epsilon_rel * total;
    long accepted_this_pass = 0;

    for (int f = 0; f < nf; ++f) {
      const int ci = f2c[f];
      if (clusters[ci].face_count <= 1) continue;  // never empty a cluster

      // distinct neighboring clusters across the three edges
      int targets[3];
      int target_count = 0;
      for (int k = 0; k < 3; ++k) {
        const int g = adj.neighbor[f][k];
        if (g < 0) continue;
        const int cj = f2c[g];
        if (cj == ci) continue;
        bool seen = false;
        for (int s = 0; s < target_count; ++s) seen |= targets[s] == cj;
        if (!seen) targets[target_count++] = cj;
      }
      if (target_count == 0) continue;  // not a boundary triangle
      if (target_count > 1) std::sort(targets, targets + target_count);

      const ClusterMoments t = ClusterMoments::from_triangle(face_moments[f]);
      if (!(clusters[ci].area - t.area > 0.0)) continue;  // remainder would be degenerate
      const ClusterMoments mi_new = split(clusters[ci], t);
      const double ei_new = cluster_energy(mi_new, params);

      int best_cj = -1;
      double best_delta = 0.0;
      ClusterMoments best_mj;
      for (int s = 0; s < target_count; ++s) {
        const int cj = targets[s];
        ClusterMoments mj_new = merge(clusters[cj], t);
        const double delta = ei_new + cluster_energy(mj_new, params) - energy[ci] - energy[cj];
        if (best_cj < 0 || delta < best_delta) {
          best_cj = cj;
          best_delta = delta;
          best_mj = mj_new;
        }
      }

      if (best_delta < -eps) {
        if (observer) observer({f, ci, best_cj, best_delta});
        clusters[ci] = mi_new;
        clusters[best_cj] = best_mj;
        energy[ci] = ei_new;
        energy[best_cj] = cluster_energy(best_mj, params);
        f2c[f] = best_cj;
        total += best_delta;
        ++accepted_this_pass;
      }
    }

    ++result.iterations;
    result.accepted += accepted_this_pass;
    result.energy_trace.push_back(total);
    if (accepted_this_pass == 0) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace varimesh
