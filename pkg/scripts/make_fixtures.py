"""Regenerate the bundled fixtures in src/twistkit/fixtures."""

import os

from twistkit import cech_mc as cm
from twistkit import descent as de
from twistkit import generators as gen
from twistkit import gtt
from twistkit import homalg as ha
from twistkit import linalg as la
from twistkit import serialize as sz
from twistkit.homalg import Complex

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "twistkit", "fixtures")
QQ = la.field_from_spec("QQ")


def save(name, kind, payload):
    with open(os.path.join(OUT, name + ".json"), "w", encoding="utf-8") as fh:
        fh.write(sz.dumps(sz.envelope(QQ, kind, payload)))


def main():
    os.makedirs(OUT, exist_ok=True)
    cover = cm.Cover(["a", "b"], [["a", "b"]])
    C = Complex(QQ, {0: 1, 1: 1}, {0: la.from_rows([[1]], QQ)})
    lab = {"a": C, "b": C}
    edges = {("a", "b"): ha.identity(C), ("b", "a"): ha.identity(C)}
    save("locfree_trivial", "locfree", sz.enc_locfree(de.LocFreeData(cover, lab, edges)))

    cover3 = cm.Cover(["a", "b", "c"], [["a", "b", "c"]])
    for seed in range(100):
        tc = gen.random_twisting_cochain(seed, QQ, cover3, lo=0, amp=1, maxdim=1)
        maps = dict(tc.maps)
        live = [t for t in sorted(maps, key=repr) if len(t) == 3 and len(set(t)) == 3 and not maps[t].is_zero()]
        if live:
            break
    victim = live[0]
    save("twist_valid", "twist", sz.enc_twist(tc))
    del maps[victim]
    save("twist_dropped", "twist", sz.enc_twist(de.TwistingCochainData(cover3, tc.labelling, maps, tc.max_length)))

    save("path_constant", "path", sz.enc_path(de.constant_path(tc)))

    e = gtt.edge_labelling(C, C, ha.identity(C), gtt.trivial(C), gtt.trivial(C))
    save("horn_identity", "horn", {"faces": [sz.enc_gtt(e), sz.enc_gtt(e)], "index": 1})

    save("map_identity", "map", sz.enc_qmap(ha.identity(C)))
    g = gen.random_gl_cocycle(3, QQ, ["a", "b", "c"], 2)
    save("cocycle_conjugated", "cocycle", sz.enc_cocycle(cover3, g))


if __name__ == "__main__":
    main()
