import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from receptron.boolexpr import eval_expr
from receptron.cli import main
from receptron.domains import HyperRectDomain, domain_contains
from receptron.dsl import load

SPECS = Path(__file__).resolve().parents[1] / "specs"
CUBE = str(SPECS / "cube.rcp")
OPEN = str(SPECS / "open_column.rcp")
TWO = str(SPECS / "two_cubes.rcp")
BAD = str(SPECS / "corrupted.rcp")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- classify --------------------------------------------------------------------------


def test_classify_cube(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    pts.write_text("5,3,10\n0,0,0\n")
    code, out, _ = run(capsys, "classify", "--spec", CUBE, "--points", str(pts))
    assert code == 0
    assert out == "x0,x1,x2,output\n5,3,10,1\n0,0,0,0\n"


def test_classify_header_and_out_file(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    pts.write_text("a,b,c\n4.2,2.5,9.1\n5,3,11.5\n")
    dest = tmp_path / "o.csv"
    code, out, _ = run(capsys, "classify", "--spec", CUBE, "--points", str(pts),
                       "--header", "--out", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text() == "a,b,c,output\n4.2,2.5,9.1,1\n5,3,11.5,0\n"


def test_classify_empty_points(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    pts.write_text("")
    code, out, _ = run(capsys, "classify", "--spec", CUBE, "--points", str(pts))
    assert code == 0 and out == "x0,x1,x2,output\n"


def test_classify_arity_mismatch(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    pts.write_text("1,2\n")
    code, _, err = run(capsys, "classify", "--spec", CUBE, "--points", str(pts))
    assert code == 3 and "expects 3 inputs" in err


def test_classify_missing_file_and_bad_values(tmp_path, capsys):
    code, _, _ = run(capsys, "classify", "--spec", CUBE, "--points", str(tmp_path / "nope"))
    assert code == 3
    pts = tmp_path / "p.csv"
    pts.write_text("1,2,abc\n")
    code, _, _ = run(capsys, "classify", "--spec", CUBE, "--points", str(pts))
    assert code == 3


def test_classify_truth_unit_rejects_analog(tmp_path, capsys):
    spec = tmp_path / "t.rcp"
    spec.write_text('unit T = truth("0110"); main = T;')
    pts = tmp_path / "p.csv"
    pts.write_text("0,1\n1,1\n")
    code, out, _ = run(capsys, "classify", "--spec", str(spec), "--points", str(pts))
    assert code == 0 and out.splitlines()[1:] == ["0,1,1", "1,1,0"]
    pts.write_text("0.5,1\n")
    code, _, _ = run(capsys, "classify", "--spec", str(spec), "--points", str(pts))
    assert code == 3


def test_parse_error_exit_code(tmp_path, capsys):
    spec = tmp_path / "bad.rcp"
    spec.write_text("unit U = selective(B);\nmain = U;\n")
    pts = tmp_path / "p.csv"
    pts.write_text("")
    code, _, err = run(capsys, "classify", "--spec", str(spec), "--points", str(pts))
    assert code == 2 and "1:20: unknown name B" in err


def test_missing_spec_is_io_error(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", "--spec", str(tmp_path / "missing.rcp"))
    assert code == 3


def test_bad_arguments_exit_3(capsys):
    with pytest.raises(SystemExit) as info:
        main(["classify"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 3


# -- render ------------------------------------------------------------------------------


def read_pgm(text):
    tokens = text.split()
    assert tokens[0] == "P2"
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    assert maxval == 255
    pixels = np.array([int(t) for t in tokens[4:]]).reshape(h, w)
    return pixels


def cell_centers(lo, hi, res):
    return lo + (np.arange(res) + 0.5) * (hi - lo) / res


def test_render_cube_slice_matches_oracle(tmp_path, capsys):
    out = tmp_path / "cube.pgm"
    code, _, _ = run(capsys, "render", "--spec", CUBE, "--axes", "0,1", "--slice", "2=10",
                     "--range", "2:8,0:6", "--res", "24", "--out", str(out))
    assert code == 0
    img = read_pgm(out.read_text())
    d = HyperRectDomain.cube((5, 3, 10), 2)
    xs = cell_centers(2, 8, 24)
    ys = cell_centers(0, 6, 24)[::-1]
    for r in range(24):
        for c in range(24):
            assert img[r, c] == 255 * domain_contains(d, (xs[c], ys[r], 10))
    # the 2 x 2 square covers 8 x 8 cells at this scale
    assert (img == 255).sum() == 64
    rows, cols = np.nonzero(img)
    assert (rows.min(), rows.max(), cols.min(), cols.max()) == (8, 15, 8, 15)


def test_render_pixel_orientation(tmp_path, capsys):
    spec = tmp_path / "corner.rcp"
    spec.write_text("domain C { center = [0, 10]; width = [2, 2]; } main = C;")
    out = tmp_path / "c.pgm"
    run(capsys, "render", "--spec", str(spec), "--axes", "0,1", "--range", "0:10,0:10",
        "--res", "10", "--out", str(out))
    img = read_pgm(out.read_text())
    # domain sits at (min axis 1, max axis 2): top-left pixel
    assert img[0, 0] == 255 and img[-1, -1] == 0 and img.sum() == 255


@pytest.mark.parametrize("z", [0.0, 2.0])
def test_render_open_column_matches_eval_expr(tmp_path, capsys, z):
    out = tmp_path / "f.pgm"
    grid = tmp_path / "f.csv"
    code, _, _ = run(capsys, "render", "--spec", OPEN, "--axes", "0,1", "--slice", f"2={z}",
                     "--range=-3:3,-3:3", "--res", "30", "--out", str(out),
                     "--grid-csv", str(grid))
    assert code == 0
    img = read_pgm(out.read_text())
    e = load(OPEN).exprs["F"]
    xs = cell_centers(-3, 3, 30)
    ys = cell_centers(-3, 3, 30)[::-1]
    want = np.array([[255 * eval_expr(e, (xs[c], ys[r], z)) for c in range(30)]
                     for r in range(30)])
    assert np.array_equal(img, want)
    if z == 2.0:
        assert img.sum() == 0  # slab missed: f_z = 0 everywhere on this slice
    else:
        # union of the x-band and y-band
        assert (img == 255).sum() == 30 * 10 * 2 - 10 * 10
    lines = grid.read_text().splitlines()
    assert lines[0] == "row,col,x0,x1,output" and len(lines) == 901
    assert sum(int(ln.rsplit(",", 1)[1]) for ln in lines[1:]) == (img == 255).sum()


@pytest.mark.parametrize(
    "extra",
    [
        ["--axes", "0,1", "--range", "0:1,0:1"],              # axis 2 unfixed
        ["--axes", "0,0", "--slice", "2=1", "--range", "0:1,0:1"],
        ["--axes", "0,1", "--slice", "2=1", "--range", "0:1"],
        ["--axes", "0,1", "--slice", "2=1", "--range", "1:0,0:1"],
        ["--axes", "0,1", "--slice", "2=1", "--range", "0:1,0:1", "--res", "1"],
        ["--axes", "0,5", "--slice", "2=1", "--range", "0:1,0:1"],
        ["--axes", "0,1", "--slice", "2", "--range", "0:1,0:1"],
    ],
)
def test_render_argument_errors(capsys, extra):
    code, _, _ = run(capsys, "render", "--spec", CUBE, *extra)
    assert code == 3


# -- verify ------------------------------------------------------------------------------


def test_verify_cube(capsys):
    code, out, _ = run(capsys, "verify", "--spec", CUBE, "--samples", "100000", "--seed", "1")
    assert code == 0
    assert "mismatches: 0" in out and "seed: 1" in out and "result: PASS" in out


def test_verify_two_cubes_all_representations(capsys):
    code, out, _ = run(capsys, "verify", "--spec", TWO, "--samples", "20000")
    assert code == 0
    assert out.splitlines().count("mismatches: 0") == 3


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--spec", BAD, "--samples", "5000")
    assert code == 1
    assert "counterexample:" in out and "result: FAIL" in out


def test_verify_expr_and_truth(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--spec", OPEN, "--samples", "5000")
    assert code == 0
    spec = tmp_path / "t.rcp"
    spec.write_text('unit T = truth("0110100110010110"); main = T;')
    code, out, _ = run(capsys, "verify", "--spec", str(spec))
    assert code == 0 and "points: 16" in out


def test_verify_multidomain_unit_main(tmp_path, capsys):
    spec = tmp_path / "m.rcp"
    spec.write_text((SPECS / "two_cubes.rcp").read_text().replace("main = N;", "main = M;"))
    code, out, _ = run(capsys, "verify", "--spec", str(spec), "--samples", "5000")
    assert code == 0 and "M vs union oracle" in out


@pytest.mark.parametrize("spec", [CUBE, TWO, BAD, OPEN])
def test_verify_deterministic_across_workers(tmp_path, capsys, spec):
    outs = []
    for workers in ("1", "4"):
        dest = tmp_path / f"v{workers}.txt"
        main(["verify", "--spec", spec, "--samples", "40000", "--seed", "7",
              "--workers", workers, "--out", str(dest)])
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


def test_render_deterministic_across_workers(tmp_path):
    outs = []
    for workers in ("1", "4"):
        dest = tmp_path / f"r{workers}.pgm"
        main(["render", "--spec", TWO, "--axes", "0,1", "--slice", "2=0", "--range=-2:12,-2:12", "--res", "200", "--workers", workers, "--out", str(dest)])
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


# -- census and synth ------------------------------------------------------------------------


@pytest.mark.parametrize("n, row", [(2, "2,14,16,0.875000"), (3, "3,104,256,0.406250"),
                                    (4, "4,1882,65536,0.028717")])
def test_census(capsys, n, row):
    code, out, _ = run(capsys, "census", "--n", str(n))
    assert code == 0 and out == f"n,separable,total,ratio\n{row}\n"


def test_census_out_of_range(capsys):
    assert run(capsys, "census", "--n", "5")[0] == 3
    assert run(capsys, "census", "--n", "0")[0] == 3


@pytest.mark.parametrize("bits, verified", [("0110", "4/4"), ("0000", "4/4"), ("01", "2/2")])
def test_synth(capsys, bits, verified):
    code, out, _ = run(capsys, "synth", "--table", bits)
    assert code == 0
    assert out.splitlines() == [f'unit T = truth("{bits}");', f"verified {verified} patterns"]


@pytest.mark.parametrize("bits", ["011", "01a0", ""])
def test_synth_malformed(capsys, bits):
    assert run(capsys, "synth", "--table", bits)[0] == 3


def test_synth_output_parses(capsys):
    from receptron.dsl import parse

    _, out, _ = run(capsys, "synth", "--table", "0110")
    doc = parse(out.splitlines()[0] + " main = T;")
    assert doc.units["T"].table == "0110"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "receptron", "synth", "--table", "0110"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "verified 4/4" in proc.stdout
