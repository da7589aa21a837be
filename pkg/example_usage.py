"""
Simple usage example for qhgeom

This walks through the main steps on the bundled meshes.
Run this after installation to see qhgeom in action.
"""

from qhgeom import Mesh, trace_tensor
from qhgeom import config
from qhgeom.fig8 import Fig8Point, closed_form, crosscheck, level_one_modulus, volume
from qhgeom.latsolve import decorate
from qhgeom.mesh import classify_vertices, validate_charged, validate_flattened, validate_I
from qhgeom.moves import pentagon_batch


def main():
    print("=" * 60)
    print("qhgeom Simple Example")
    print("=" * 60)
    print()

    # Example 1: load and inspect a mesh
    print("\n📐 Example 1: The figure-eight knot complement\n")

    m = Mesh.load(config.FIG8_MESH_FILE)
    print(m)
    for vc in classify_vertices(m):
        print(f"  vertex {vc.index}: {vc.kind} link, euler characteristic {vc.euler}")
    for report in (validate_I(m), validate_flattened(m), validate_charged(m)):
        print(f"  {report.kind}: {'ok' if report.ok else report.violations}")

    # Example 2: decorate with the integer solvers, then contract
    print("=" * 60)
    print("\n🔢 Example 2: Solvers and state sum\n")

    doubled = decorate(Mesh.load(config.DOUBLED_TET_FILE))
    print(f"Flattenings: {doubled.flattenings()}")
    print(f"Charges:     {doubled.charges()}")
    for N in (1, 3, 5):
        print(f"  N={N}: {trace_tensor(doubled, N).scalar:.10g}")

    # Example 3: closed forms
    print("=" * 60)
    print("\n🪢 Example 3: State sum against closed form\n")

    for N in (3, 5, 7):
        print(f"  N={N}: {crosscheck(N)}")
    deformed = Fig8Point(0.55 + 0.9j)
    print(f"  deformed {deformed}: {closed_form(3, deformed):.10g}")
    print(f"  volume {volume():.12f}, level-one modulus {level_one_modulus():.12f}")

    # Example 4: pentagon identity
    print("=" * 60)
    print("\n⬠ Example 4: Pentagon identity\n")

    report = pentagon_batch(3, samples=10, seed=config.DEFAULT_SEED, progress=True)
    print(report.to_dict())

    print("\n" + "=" * 60)
    print("\n✅ Examples complete!")
    print("\n💡 To run the full CLI: qhgeom --help  (or: python -m qhgeom --help)")
    print("=" * 60)


if __name__ == "__main__":
    main()
