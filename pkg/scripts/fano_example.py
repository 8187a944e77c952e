"""The degree-10 Fano 3-fold polytope: separation stalls, the oracle finds Sec_2 defective."""
from toricsecant.bounds import hyperplane_bound_exact
from toricsecant.lattice import fano_polytope, max_hyperplane_points
from toricsecant.separation import certify_non_defective
from toricsecant.terracini import defect_report

p = fano_polytope()
print("lattice points:", list(p.lattice_points))
hb = hyperplane_bound_exact(p)
print(f"facet maximum {hb.max_section_points}, any-plane maximum "
      f"{max_hyperplane_points(p.lattice_points.points)}, bound {hb.value} (proof grade: {hb.proof_grade})")
v = certify_non_defective(p, runs=50, seed=0)
print(f"separation over 50 runs: best k={v.k}, complete={v.complete}")
for e in defect_report(p, trials=3).entries:
    print(f"h={e.h}: expected {e.expected}, computed {e.computed}, {e.status}")
