"""Synthetic degradation laboratory: kernels, corruptions, pipelines, parsing."""

import numpy as np
import pytest

from easdet import blur, image, testimages
from easdet.errors import FormatError


@pytest.fixture
def rng():
    return np.random.default_rng(31337)


@pytest.fixture
def scene():
    return testimages.synthetic_scene(128, seed=4)


# ---------------------------------------------------------------- gaussian kernel


def test_gaussian_kernel_shape_and_sum():
    for sigma in (0.5, 1.0, 2.5, 9.0):
        k = blur.gaussian_kernel(sigma)
        r = int(np.ceil(3.0 * sigma))
        assert k.weights.shape == (2 * r + 1, 2 * r + 1)
        assert abs(k.weights.sum() - 1.0) < 1e-9
        assert k.kx is not None and k.ky is not None  # runs as two passes
        k.validate_psf()


def test_gaussian_kernel_symmetry():
    k = blur.gaussian_kernel(1.7).weights
    assert np.array_equal(k, k[::-1, :])
    assert np.array_equal(k, k[:, ::-1])
    assert np.array_equal(k, k.T)
    # strictly decreasing away from the center along the axis
    c = k.shape[0] // 2
    row = k[c]
    assert np.all(np.diff(row[c:]) < 0)


def test_gaussian_kernel_bad_sigma():
    with pytest.raises(ValueError):
        blur.gaussian_kernel(0.0)
    with pytest.raises(ValueError):
        blur.gaussian_kernel(-1.0)


# ---------------------------------------------------------------- motion kernel


def test_motion_length_one_is_identity(scene):
    k = blur.motion_kernel(1.0, 0.7)
    assert k.weights.shape == (1, 1)
    assert k.weights[0, 0] == 1.0
    out = image.convolve(scene, k)
    assert np.array_equal(out, scene)


def test_motion_three_horizontal_exact_thirds():
    k = blur.motion_kernel(3.0, 0.0)
    assert k.weights.shape == (1, 3)
    assert np.array_equal(k.weights[0], np.array([1.0, 1.0, 1.0]) / 3.0)


def test_motion_three_vertical_exact_thirds():
    k = blur.motion_kernel(3.0, np.pi / 2)
    assert k.weights.shape == (3, 1)
    assert np.array_equal(k.weights[:, 0], np.array([1.0, 1.0, 1.0]) / 3.0)


def test_motion_even_count_half_weight_endpoints():
    # 4 unit-spaced samples land on half-integers: endpoints split evenly
    k = blur.motion_kernel(4.0, 0.0)
    assert k.weights.shape == (1, 5)
    assert np.allclose(k.weights[0], [0.125, 0.25, 0.25, 0.25, 0.125])


def test_motion_direction_is_modulo_pi():
    a = blur.motion_kernel(7.0, 0.0).weights
    b = blur.motion_kernel(7.0, np.pi).weights
    assert np.array_equal(a, b)
    c = blur.motion_kernel(7.0, np.pi / 4).weights
    d = blur.motion_kernel(7.0, np.pi / 4 + np.pi).weights
    assert c.shape == d.shape
    assert np.max(np.abs(c - d)) < 1e-12


def test_motion_diagonal_mass_and_symmetry():
    k = blur.motion_kernel(9.0, np.pi / 4).weights
    assert abs(k.sum() - 1.0) < 1e-9
    # 45 degrees: kernel is square and symmetric under 180-degree rotation
    assert k.shape[0] == k.shape[1]
    assert np.allclose(k, k[::-1, ::-1])


def test_motion_preserves_constant(scene):
    img = np.full((40, 40), 0.77)
    out = image.convolve(img, blur.motion_kernel(12.0, 0.3))
    assert np.max(np.abs(out - 0.77)) < 1e-12


# ---------------------------------------------------------------- rotational blur


def test_rotational_constant_bitwise():
    img = np.full((48, 48), 0.6)
    out = blur.rotational_blur(img, 0.9, (23.5, 23.5))
    assert np.array_equal(out, img)


def test_rotational_center_pixel_stable():
    img = np.zeros((33, 33))
    img[16, 16] = 1.0
    out = blur.rotational_blur(img, 0.5, (16.0, 16.0))
    assert out[16, 16] > 0.9  # center of rotation barely moves


def test_rotational_invariance_on_rings():
    """Concentric rings are invariant under rotation about their center, so
    angular smearing should leave the inscribed disk nearly untouched."""
    img = testimages.rings(256, period=14, amplitude=0.35)
    out = blur.rotational_blur(img, np.pi / 3, (127.5, 127.5))
    y, x = np.mgrid[0:256, 0:256]
    rho = np.hypot(x - 127.5, y - 127.5)
    inside = rho <= 120
    assert np.max(np.abs(out[inside] - img[inside])) <= 0.02


def test_rotational_smears_off_center_point():
    img = np.zeros((64, 64))
    img[31, 50] = 1.0
    out = blur.rotational_blur(img, 1.0, (31.5, 31.5))
    assert out[31, 50] < 0.2   # mass spread along the arc
    assert abs(out.sum() - 1.0) < 0.05


def test_rotational_deterministic(scene):
    a = blur.rotational_blur(scene, 0.7, (63.5, 63.5))
    b = blur.rotational_blur(scene, 0.7, (63.5, 63.5))
    assert np.array_equal(a, b)


# ---------------------------------------------------------------- salt & pepper


def test_salt_pepper_zero_fraction_bitwise(scene):
    out = blur.salt_pepper(scene, 0.0, seed=1)
    assert np.array_equal(out, scene)


def test_salt_pepper_deterministic(scene):
    a = blur.salt_pepper(scene, 0.1, seed=42)
    b = blur.salt_pepper(scene, 0.1, seed=42)
    c = blur.salt_pepper(scene, 0.1, seed=43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_salt_pepper_values_and_rate(scene):
    frac = 0.1
    out = blur.salt_pepper(scene, frac, seed=7)
    changed = out != scene
    assert set(np.unique(out[changed])) <= {0.0, 1.0}
    rate = changed.mean()
    # hit rate concentrates near frac; allow generous sampling slack
    assert abs(rate - frac) < 0.02
    # untouched pixels are bitwise identical
    assert np.array_equal(out[~changed], scene[~changed])


def test_salt_pepper_seed_is_positional_not_spatial(scene):
    """The noise pattern depends on flat pixel index, so two images of the
    same shape get hits at the same locations for the same seed."""
    other = testimages.synthetic_scene(128, seed=9)
    a = blur.salt_pepper(scene, 0.08, seed=5)
    b = blur.salt_pepper(other, 0.08, seed=5)
    assert np.array_equal(a != scene, b != other)


# ---------------------------------------------------------------- pipelines


def test_apply_pipeline_single_gaussian(scene):
    pipe = blur.BlurPipeline([blur.BlurSpec.gaussian(2.0)])
    out = blur.apply_pipeline(scene, pipe)
    ref = image.convolve(scene, blur.gaussian_kernel(2.0))
    assert np.array_equal(out, ref)


def test_apply_pipeline_order_matters(scene):
    g = blur.BlurSpec.gaussian(2.0)
    s = blur.BlurSpec.salt_pepper(0.1, seed=3)
    a = blur.apply_pipeline(scene, blur.BlurPipeline([g, s]))
    b = blur.apply_pipeline(scene, blur.BlurPipeline([s, g]))
    assert not np.array_equal(a, b)


def test_apply_pipeline_region_outside_untouched(scene):
    reg = blur.Region(x=32, y=16, w=40, h=50)
    step = blur.BlurSpec.gaussian(3.0, region=reg)
    out = blur.apply_pipeline(scene, blur.BlurPipeline([step]))
    mask = np.zeros(scene.shape, dtype=bool)
    mask[16 : 16 + 50, 32 : 32 + 40] = True
    assert np.array_equal(out[~mask], scene[~mask])
    assert not np.array_equal(out[mask], scene[mask])
    # inside matches the full-frame blur exactly (hard-edged composite)
    full = image.convolve(scene, blur.gaussian_kernel(3.0))
    assert np.array_equal(out[mask], full[mask])


def test_pipeline_mean_preserved(scene):
    for pipe in ("gaussian sigma=3", "motion l=15 theta=0.9"):
        out = blur.apply_pipeline(scene, blur.parse_pipeline(pipe))
        assert abs(out.mean() - scene.mean()) < 1e-3, pipe
    # the rotational warp replicates the border into the swept corners, so
    # measure conservation inside the inscribed disk only
    out = blur.apply_pipeline(
        scene, blur.parse_pipeline("rotational alpha=0.6 cx=63.5 cy=63.5")
    )
    y, x = np.mgrid[0:128, 0:128]
    disk = np.hypot(x - 63.5, y - 63.5) <= 60
    assert abs(out[disk].mean() - scene[disk].mean()) < 1e-3


def test_pipeline_deterministic(scene):
    pipe = blur.parse_pipeline(
        "gaussian sigma=2\nsaltpepper frac=0.05 seed=11\nmotion l=9 theta=0.4"
    )
    a = blur.apply_pipeline(scene, pipe)
    b = blur.apply_pipeline(scene, pipe)
    assert np.array_equal(a, b)


def test_empty_pipeline_rejected():
    with pytest.raises(ValueError):
        blur.BlurPipeline([])


# ---------------------------------------------------------------- parsing


def test_parse_step_gaussian():
    s = blur.parse_step("gaussian sigma=9")
    assert s.kind == "gaussian"
    assert s.sigma == 9.0
    assert s.region is None


def test_parse_step_motion():
    s = blur.parse_step("motion l=30 theta=1.5708")
    assert s.kind == "motion"
    assert s.l == 30.0
    assert s.theta == 1.5708


def test_parse_step_rotational():
    s = blur.parse_step("rotational alpha=1.0472 cx=256 cy=256")
    assert s.kind == "rotational"
    assert (s.alpha, s.cx, s.cy) == (1.0472, 256.0, 256.0)


def test_parse_step_saltpepper_with_default_seed():
    s = blur.parse_step("saltpepper frac=0.1 seed=42")
    assert (s.frac, s.seed) == (0.1, 42)
    s2 = blur.parse_step("saltpepper frac=0.1", default_seed=7)
    assert s2.seed == 7


def test_parse_step_region_suffix():
    s = blur.parse_step("gaussian sigma=2 region x=8 y=9 w=16 h=17")
    assert s.region == blur.Region(8, 9, 16, 17)


def test_parse_pipeline_comments_and_blanks():
    text = "# smoothing first\ngaussian sigma=1.5\n\n# then streaks\nmotion l=5 theta=0\n"
    pipe = blur.parse_pipeline(text)
    assert len(pipe.steps) == 2
    assert pipe.steps[0].kind == "gaussian"
    assert pipe.steps[1].kind == "motion"


def test_parse_errors():
    bad = [
        "swirl amount=3",               # unknown kind
        "gaussian",                     # missing parameter
        "gaussian sigma=-2",            # out of range
        "gaussian sigma=abc",           # not a number
        "motion l=5",                   # missing theta
        "gaussian sigma=1 bogus=2",     # unknown key
        "saltpepper frac=1.5 seed=1",   # fraction above one
        "gaussian sigma=1 region x=0 y=0 w=0 h=4",  # empty region
    ]
    for line in bad:
        with pytest.raises(FormatError):
            blur.parse_step(line)


def test_step_text_round_trip():
    cases = [
        "gaussian sigma=9",
        "motion l=30 theta=1.5708",
        "rotational alpha=1.0472 cx=256 cy=256",
        "saltpepper frac=0.1 seed=42",
        "gaussian sigma=2 region x=8 y=8 w=16 h=16",
    ]
    for line in cases:
        s = blur.parse_step(line)
        assert blur.parse_step(blur.step_text(s)) == s


def test_pipeline_text_round_trip():
    text = "gaussian sigma=2\nsaltpepper frac=0.05 seed=11"
    pipe = blur.parse_pipeline(text)
    again = blur.parse_pipeline(blur.pipeline_text(pipe))
    assert again == pipe


def test_pipeline_condition_label():
    pipe = blur.parse_pipeline("gaussian sigma=2")
    label = blur.pipeline_condition(pipe)
    assert "gaussian" in label and "sigma=2" in label
