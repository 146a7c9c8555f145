#!/usr/bin/env python3
"""Generate the shipped tetrahedral meshes (Gmsh MSH 2.2 ASCII).

Physical tags: 1 = BODY, 2 = SHELL, 11 = INTERFACE, 12 = SPHERE.

    python3 tools/gen_meshes.py [outdir]
"""
import math
import sys

import gmsh

BODY, SHELL, INTERFACE, SPHERE = 1, 2, 11, 12


def _body_sphere(occ):
    return [(3, occ.addSphere(0, 0, 0, 1.0))]


def _body_peanut(occ):
    a = occ.addSphere(-0.45, 0, 0, 0.7)
    b = occ.addSphere(0.45, 0, 0, 0.7)
    out, _ = occ.fuse([(3, a)], [(3, b)])
    return out


def build(path, body, radius, lc_body, lc_shell, refine_point=None):
    gmsh.initialize()
    gmsh.option.setNumber("General.Terminal", 0)
    gmsh.option.setNumber("General.NumThreads", 1)
    gmsh.model.add("emel")
    occ = gmsh.model.occ
    inner = body(occ)
    outer = occ.addSphere(0, 0, 0, radius)
    frag, _ = occ.fragment([(3, outer)], inner)
    occ.synchronize()

    vols = [t for d, t in gmsh.model.getEntities(3)]
    # The body volume is the one whose bounding box does not reach the outer sphere.
    body_vols, shell_vols = [], []
    for v in vols:
        xmin, ymin, zmin, xmax, ymax, zmax = gmsh.model.getBoundingBox(3, v)
        if max(abs(xmin), abs(xmax), abs(ymin), abs(ymax), abs(zmin), abs(zmax)) > 0.99 * radius:
            shell_vols.append(v)
        else:
            body_vols.append(v)
    body_faces = set()
    for v in body_vols:
        body_faces.update(t for d, t in gmsh.model.getBoundary([(3, v)], oriented=False))
    shell_faces = set()
    for v in shell_vols:
        shell_faces.update(t for d, t in gmsh.model.getBoundary([(3, v)], oriented=False))
    iface = sorted(body_faces & shell_faces)
    sphere = sorted(shell_faces - body_faces)

    gmsh.model.addPhysicalGroup(3, body_vols, BODY)
    gmsh.model.addPhysicalGroup(3, shell_vols, SHELL)
    gmsh.model.addPhysicalGroup(2, iface, INTERFACE)
    gmsh.model.addPhysicalGroup(2, sphere, SPHERE)

    # Mesh size grows linearly from lc_body at the body surface to lc_shell at S_R.
    f = gmsh.model.mesh.field
    dist = f.add("Distance")
    f.setNumbers(dist, "SurfacesList", iface)
    thr = f.add("Threshold")
    f.setNumber(thr, "InField", dist)
    f.setNumber(thr, "SizeMin", lc_body)
    f.setNumber(thr, "SizeMax", lc_shell)
    f.setNumber(thr, "DistMin", 0.0)
    f.setNumber(thr, "DistMax", radius - 1.0)
    fields = [thr]
    if refine_point is not None:
        px, py, pz, hmin, grow = refine_point
        pt = occ.addPoint(px, py, pz)
        occ.synchronize()
        d2 = f.add("Distance")
        f.setNumbers(d2, "PointsList", [pt])
        m = f.add("MathEval")
        f.setString(m, "F", f"{hmin} + {grow}*F{d2}")
        fields.append(m)
    mn = f.add("Min")
    f.setNumbers(mn, "FieldsList", fields)
    f.setAsBackgroundMesh(mn)
    gmsh.option.setNumber("Mesh.MeshSizeExtendFromBoundary", 0)
    gmsh.option.setNumber("Mesh.MeshSizeFromPoints", 0)
    gmsh.option.setNumber("Mesh.MeshSizeFromCurvature", 0)
    gmsh.option.setNumber("Mesh.Algorithm", 6)
    gmsh.option.setNumber("Mesh.Algorithm3D", 1)
    gmsh.option.setNumber("Mesh.RandomSeed", 1)
    gmsh.model.mesh.generate(3)
    gmsh.model.mesh.optimize("Netgen")
    gmsh.option.setNumber("Mesh.MshFileVersion", 2.2)
    gmsh.option.setNumber("Mesh.Binary", 0)
    gmsh.option.setNumber("Mesh.SaveAll", 0)
    gmsh.write(path)
    gmsh.finalize()


LEVELS = {"L1": (0.30, 0.50), "L2": (0.21, 0.36), "L3": (0.15, 0.26)}


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/meshes"
    for name, (lb, ls) in LEVELS.items():
        build(f"{out}/sphere_R2_{name}.msh", _body_sphere, 2.0, lb, ls)
        build(f"{out}/peanut_R2_{name}.msh", _body_peanut, 2.0, lb, ls)
    for r in (1.5, 2.5):
        build(f"{out}/sphere_R{r:g}_L1.msh", _body_sphere, r, 0.30, 0.50)
    # Probe geometry: strong refinement around the north pole of the body.
    build(f"{out}/sphere_probe.msh", _body_sphere, 2.0, 0.25, 0.5,
          refine_point=(0.0, 0.0, 1.0, 0.008, 0.35))


if __name__ == "__main__":
    main()
