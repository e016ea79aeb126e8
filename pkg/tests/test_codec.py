import inspect
import logging
import numpy as np
import pytest
from conftest import grayscale_host, host_with_singular_values, spaced_host
from circmark import codec
from circmark.codec import WatermarkKey, detect, embed, extract, extracted_watermark, embedded_watermark
from circmark.constants import BLOCK_STRENGTH
from circmark.error import GeometryError, ParameterError
from circmark.image import Image, quantize
from circmark.linalg import svd, circulant_spectrum
from circmark.metrics import psnr
from circmark.watermark import WatermarkSpec, assemble_watermark, watermark_singulars


def test_detection_is_blind():
    assert list(inspect.signature(detect).parameters) == ['image', 'key', 'tol', 'extract']
    assert list(inspect.signature(extract).parameters) == ['image', 'key']


def test_tiny_alpha_barely_changes_the_image(spaced):
    spec = WatermarkSpec.generate(0, 4, spaced.side)
    watermarked, _ = embed(spaced, spec, 1e-12)
    assert np.linalg.norm(watermarked.samples - spaced.samples) <= 1e-9 * np.linalg.norm(spaced.samples)


def test_embedding_adds_the_spectrum_to_the_singular_values(rng):
    host = Image(rng.uniform(0, 255, size=(8, 8)))
    spec = WatermarkSpec([(1, 2, 3, 4)], 8)
    watermarked, key = embed(host, spec, 0.5)
    expected = np.sort(svd(host.samples).S + 0.5 * np.array([100, 4, 8, 8, 0, 0, 0, 0]))[::-1]
    np.testing.assert_allclose(svd(watermarked.samples).S, expected, atol=1e-9 * expected[0])
    np.testing.assert_array_equal(key.s_prefix, svd(host.samples).S[:4])


def test_clean_round_trip():
    rng = np.random.default_rng(2024)
    for trial in range(100):
        side = int(rng.choice([16, 32, 64]))
        k = int(rng.integers(1, side // 4 + 1))
        alpha = float(rng.uniform(0.01, 0.2))
        host = spaced_host(side, seed=trial)
        spec = WatermarkSpec.generate(trial, k, side)
        watermarked, key = embed(host, spec, alpha)
        assert not key.y_monotone_warning

        report = detect(watermarked, key, tol=1e-6, extract=True)
        np.testing.assert_allclose(report.x, watermark_singulars(spec)[:4 * k], rtol=1e-6, atol=1e-6)
        assert report.detected
        assert np.max(np.abs(report.extracted - assemble_watermark(spec))) <= 1e-6


def test_monotone_embedding_keeps_its_singular_values(spaced):
    spec = WatermarkSpec.generate(5, 3, spaced.side)
    alpha = 0.06
    watermarked, key = embed(spaced, spec, alpha)
    assert not key.y_monotone_warning
    expected = svd(spaced.samples).S + alpha * watermark_singulars(spec)
    np.testing.assert_allclose(svd(watermarked.samples).S, expected, rtol=1e-12, atol=1e-8)


def test_non_monotone_embedding_is_flagged(caplog):
    host = host_with_singular_values(100.0 - 0.1 * np.arange(16))
    spec = WatermarkSpec([(1, 0, -1, 0)], 16)
    with caplog.at_level(logging.WARNING, logger='circmark.codec'):
        watermarked, key = embed(host, spec, 1.0)
    assert key.y_monotone_warning
    assert 'not strictly decreasing' in caplog.text
    # the singular values of A* are the perturbed ones, sorted
    expected = np.sort(svd(host.samples).S + watermark_singulars(spec))[::-1]
    np.testing.assert_allclose(svd(watermarked.samples).S, expected, atol=1e-10)


def test_unordered_blocks_are_logged(caplog, spaced):
    with caplog.at_level(logging.WARNING, logger='circmark.codec'):
        embed(spaced, WatermarkSpec([(1, 2, 3, 4)], spaced.side), 0.06)
    assert 'do not satisfy' in caplog.text


def test_psnr_decreases_with_alpha(spaced):
    spec = WatermarkSpec.generate(11, 2, spaced.side)
    values = [psnr(spaced, embed(spaced, spec, alpha)[0]) for alpha in (0.01, 0.03, 0.05, 0.07, 0.09)]
    assert all(later <= earlier for earlier, later in zip(values, values[1:]))


def test_clean_detection_signature(spaced):
    spec = WatermarkSpec.generate(3, 1, spaced.side)
    watermarked, key = embed(spaced, spec, 0.06)
    report = detect(watermarked, key, tol=1e-6)
    delta3 = circulant_spectrum(spec.blocks[0])[2]
    np.testing.assert_allclose(report.x[2:4], [delta3, delta3], rtol=1e-6)
    assert report.block_pass == (True,)
    assert report.extracted is None


def test_extracted_watermark_for_flat_spectrum():
    expected = np.zeros((8, 8))
    expected[:4, :4] = np.eye(4)
    np.testing.assert_allclose(extracted_watermark(np.ones(4), 8), expected, atol=1e-15)


def test_extract_matches_detect(spaced):
    spec = WatermarkSpec.generate(8, 2, spaced.side)
    watermarked, key = embed(spaced, spec, 0.1)
    assert np.array_equal(extract(watermarked, key), detect(watermarked, key, extract=True).extracted)
    np.testing.assert_allclose(embedded_watermark(key), assemble_watermark(spec))


def test_detect_rejects_other_sizes(spaced):
    _, key = embed(spaced, WatermarkSpec.generate(0, 1, spaced.side), 0.06)
    with pytest.raises(GeometryError):
        detect(Image(np.zeros((32, 32))), key)


def test_embed_argument_checks(spaced):
    spec = WatermarkSpec.generate(0, 1, spaced.side)
    with pytest.raises(ParameterError):
        embed(spaced, spec, 0.0)
    with pytest.raises(GeometryError):
        embed(Image(np.zeros((10, 10))), WatermarkSpec.generate(0, 1, 8), 0.06)
    with pytest.raises(GeometryError):
        embed(spaced, WatermarkSpec.generate(0, 1, 32), 0.06)


def test_key_validation():
    with pytest.raises(ValueError):
        WatermarkKey(0.0, 1, [4, 3, 2, 1], 8)
    with pytest.raises(ValueError):
        WatermarkKey(0.06, 1, [4, 3, 2], 8)
    with pytest.raises(ValueError):
        WatermarkKey(0.06, 1, [1, 2, 3, 4], 8)
    with pytest.raises(ValueError):
        WatermarkKey(0.06, 3, [1] * 12, 8)
    with pytest.raises(ValueError):
        WatermarkKey(0.06, 1, [4, 3, 2, 1], 8).spec


def test_detection_needs_no_blocks(spaced):
    spec = WatermarkSpec.generate(9, 2, spaced.side)
    watermarked, key = embed(spaced, spec, 0.06)
    stripped = key.without_blocks()
    assert not stripped.has_blocks
    assert np.array_equal(detect(watermarked, stripped).x, detect(watermarked, key).x)


def test_false_positive_rate(gray):
    _, key = embed(gray, WatermarkSpec.generate(1, 1, gray.side), 0.06)
    rng = np.random.default_rng(99)
    false_positives = sum(detect(Image(rng.integers(0, 256, size=(64, 64))), key).detected for _ in range(1000))
    assert false_positives <= 10


def test_detection_survives_quantization(gray):
    spec = WatermarkSpec([(3, 1, -3, -1)], gray.side)
    watermarked, key = embed(gray, spec, 1.0)
    assert not key.y_monotone_warning
    report = detect(quantize(watermarked), key, tol=0.05)
    assert report.detected
    np.testing.assert_allclose(report.x[2:4], [40.0, 40.0], atol=2.0)


def test_gray_host_fits_in_eight_bits(gray):
    assert gray.samples.min() > 0 and gray.samples.max() < 255
    assert codec.is_strictly_decreasing(svd(gray.samples).S[:6])


def test_original_image_is_not_detected(gray, spaced):
    for host, k in ((gray, 1), (spaced, 3)):
        _, key = embed(host, WatermarkSpec.generate(0, k, host.side), 0.06)
        report = detect(host, key)
        np.testing.assert_allclose(report.x, 0.0, atol=1e-6)
        assert report.block_pass == (False,) * k
        assert not report.detected


def test_signature_needs_a_positive_pair():
    assert codec.signature_holds(100.0, 103.0, 0.05)
    assert not codec.signature_holds(100.0, 110.0, 0.05)
    assert not codec.signature_holds(0.0, 0.0, 0.05)
    assert not codec.signature_holds(-100.0, -100.0, 0.05)
    assert not codec.signature_holds(0.4, 0.4, 0.05)


@pytest.mark.parametrize('side', [16, 64])
def test_one_block_psnr_only_depends_on_alpha(side):
    host = spaced_host(side)
    watermarked, _ = embed(host, WatermarkSpec.generate(42, 1, side), 0.06)
    assert psnr(host, watermarked) == pytest.approx(20 * np.log10(255 / (0.06 * BLOCK_STRENGTH)), abs=1e-6)
    assert psnr(host, watermarked) == pytest.approx(56.72, abs=0.01)


def test_further_blocks_cost_less_psnr(spaced):
    one = psnr(spaced, embed(spaced, WatermarkSpec.generate(42, 1, spaced.side), 0.06)[0])
    four = psnr(spaced, embed(spaced, WatermarkSpec.generate(42, 4, spaced.side), 0.06)[0])
    assert one - four == pytest.approx(10 * np.log10(1 + 1 / 2 + 1 / 3 + 1 / 4), abs=1e-6)


def test_default_watermark_survives_rounding(gray):
    host = quantize(gray)
    watermarked, key = embed(host, WatermarkSpec.generate(42, 1, host.side), 0.06)
    marked = quantize(watermarked)
    assert np.count_nonzero(marked.samples != host.samples) > 0.02 * host.samples.size
    # rounding noise is small next to the signature
    x = detect(marked, key).x
    delta3 = circulant_spectrum(key.blocks[0])[2]
    np.testing.assert_allclose(x[2:4], [delta3, delta3], rtol=0.5)
