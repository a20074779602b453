#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "flarespot/color.hpp"
#include "flarespot/detector.hpp"
#include "flarespot/evaluate.hpp"
#include "flarespot/flaremask.hpp"
#include "flarespot/inpaint.hpp"
#include "flarespot/synthgen.hpp"

namespace py = pybind11;
using namespace flarespot;

namespace {

RgbImage image_from_array(const py::array_t<std::uint8_t, py::array::c_style>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw py::value_error("expected an HxWx3 uint8 array");
    RgbImage img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(img.data().data(), arr.data(), img.data().size());
    return img;
}

py::array_t<std::uint8_t> array_from_image(const RgbImage& img) {
    py::array_t<std::uint8_t> arr({img.height(), img.width(), 3});
    std::memcpy(arr.mutable_data(), img.data().data(), img.data().size());
    return arr;
}

BinaryMask mask_from_array(const py::array_t<std::uint8_t, py::array::c_style>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected an HxW uint8 mask");
    BinaryMask mask(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    const std::uint8_t* src = arr.data();
    for (std::size_t i = 0; i < mask.bits().size(); ++i) mask.bits()[i] = src[i] ? 1 : 0;
    return mask;
}

py::array_t<std::uint8_t> array_from_mask(const BinaryMask& mask) {
    py::array_t<std::uint8_t> arr({mask.height(), mask.width()});
    std::uint8_t* dst = arr.mutable_data();
    for (std::size_t i = 0; i < mask.bits().size(); ++i) dst[i] = mask.bits()[i] ? 255 : 0;
    return arr;
}

PipelineParams params_from_kwargs(const py::kwargs& kwargs) {
    PipelineParams p;
    for (const auto& item : kwargs) {
        const std::string key = py::cast<std::string>(item.first);
        const double value = py::cast<double>(item.second);
        if (key == "iota") p.iota = value;
        else if (key == "sigma_min") p.sigmaMin = value;
        else if (key == "sigma_max") p.sigmaMax = value;
        else if (key == "delta") p.delta = value;
        else if (key == "beta") p.beta = value;
        else if (key == "epsilon") p.epsilon = value;
        else if (key == "alpha") p.alpha = value;
        else if (key == "k") p.k = value;
        else if (key == "window_fraction") p.windowFraction = value;
        else if (key == "secondary_ratio") p.secondaryRatio = value;
        else if (key == "opening_radius") p.openingRadius = value;
        else if (key == "max_sources") p.maxSources = static_cast<std::size_t>(value);
        else throw py::value_error("unknown parameter: " + key);
    }
    return p;
}

py::dict detection_dict(const FlareDetection& d) {
    py::dict out;
    out["flare_point"] = py::make_tuple(d.flarePoint.x, d.flarePoint.y);
    out["scale"] = d.scale;
    out["confidence"] = d.confidence;
    out["source_centroid"] = py::make_tuple(d.source.centroid.x, d.source.centroid.y);
    out["source_area"] = d.source.area;
    out["e_raw"] = py::make_tuple(d.candidate.e1, d.candidate.e2, d.candidate.e3);
    out["e_norm"] = py::make_tuple(d.candidate.e1n, d.candidate.e2n, d.candidate.e3n);
    return out;
}

BinaryMask build_mask(const RgbImage& img, const LabImage& lab,
                      const std::vector<FlareDetection>& dets, const PipelineParams& p) {
    std::vector<FlareRegion> regions;
    for (const FlareDetection& det : dets) {
        const Window win = search_window(det.source, img.width(), img.height(),
                                         p.windowFraction);
        auto region = build_flare_region(lab, det, p.delta, p.epsilon, p.alpha, win);
        if (region) regions.push_back(std::move(*region));
    }
    return merge_masks(regions, img.width(), img.height());
}

}  // namespace

PYBIND11_MODULE(_flarespot, m) {
    m.doc() = "Flare spot detection, masking, inpainting and scoring";

    m.def("rgb_to_lab",
          [](const py::array_t<std::uint8_t, py::array::c_style>& arr) {
              const LabImage lab = rgb_to_lab(image_from_array(arr));
              py::array_t<double> out({lab.height(), lab.width(), 3});
              double* dst = out.mutable_data();
              for (std::size_t i = 0; i < lab.L.values().size(); ++i) {
                  dst[3 * i] = lab.L.values()[i];
                  dst[3 * i + 1] = lab.a.values()[i];
                  dst[3 * i + 2] = lab.b.values()[i];
              }
              return out;
          },
          py::arg("image"), "Convert an HxWx3 uint8 sRGB image to CIELab planes.");

    m.def("detect",
          [](const py::array_t<std::uint8_t, py::array::c_style>& arr, const py::kwargs& kw) {
              const RgbImage img = image_from_array(arr);
              const auto dets = detect_all(img, params_from_kwargs(kw));
              py::list out;
              for (const auto& d : dets) out.append(detection_dict(d));
              return out;
          },
          py::arg("image"), "Detect flare spots; returns one record per light source.");

    m.def("flare_mask",
          [](const py::array_t<std::uint8_t, py::array::c_style>& arr, const py::kwargs& kw) {
              const RgbImage img = image_from_array(arr);
              const PipelineParams p = params_from_kwargs(kw);
              const LabImage lab = rgb_to_lab(img);
              return array_from_mask(build_mask(img, lab, detect_all(lab, p), p));
          },
          py::arg("image"), "Merged binary flare mask (uint8, 255 = flare).");

    m.def("remove",
          [](const py::array_t<std::uint8_t, py::array::c_style>& arr, int patch_side,
             int levels, int iterations, std::uint64_t seed, const py::kwargs& kw) {
              const RgbImage img = image_from_array(arr);
              const PipelineParams p = params_from_kwargs(kw);
              const LabImage lab = rgb_to_lab(img);
              const auto dets = detect_all(lab, p);
              const BinaryMask mask = build_mask(img, lab, dets, p);

              RgbImage restored = img;
              if (mask.count() > 0) {
                  InpaintProblem problem;
                  problem.image = img;
                  problem.hole = mask;
                  problem.patchSide = patch_side;
                  problem.levels = levels;
                  problem.iterations = iterations;
                  problem.seed = seed;
                  restored = inpaint(problem);
              }
              py::list detList;
              for (const auto& d : dets) detList.append(detection_dict(d));
              return py::make_tuple(array_from_image(restored), array_from_mask(mask), detList);
          },
          py::arg("image"), py::arg("patch_side") = 7, py::arg("levels") = 0,
          py::arg("iterations") = 10, py::arg("seed") = 1,
          "Full pipeline: returns (restored, mask, detections).");

    m.def("inpaint",
          [](const py::array_t<std::uint8_t, py::array::c_style>& arr,
             const py::array_t<std::uint8_t, py::array::c_style>& mask, int patch_side,
             int levels, int iterations, std::uint64_t seed) {
              InpaintProblem problem;
              problem.image = image_from_array(arr);
              problem.hole = mask_from_array(mask);
              problem.patchSide = patch_side;
              problem.levels = levels;
              problem.iterations = iterations;
              problem.seed = seed;
              return array_from_image(inpaint(problem));
          },
          py::arg("image"), py::arg("mask"), py::arg("patch_side") = 7, py::arg("levels") = 0,
          py::arg("iterations") = 10, py::arg("seed") = 1,
          "Exemplar-based inpainting of the masked region.");

    m.def("render_scene",
          [](std::uint64_t seed, int width, int height, int num_sources, bool with_flares,
             int background) {
              std::mt19937_64 rng(seed);
              SceneOptions opts;
              opts.width = width;
              opts.height = height;
              opts.numSources = num_sources;
              opts.withFlares = with_flares;
              opts.background = background;
              const auto [img, gt] = render(make_random_scene(rng, opts));
              py::list points;
              for (const Point& p : gt.flarePoints) points.append(py::make_tuple(p.x, p.y));
              return py::make_tuple(array_from_image(img), array_from_mask(gt.flareMask),
                                    points);
          },
          py::arg("seed"), py::arg("width") = 256, py::arg("height") = 256,
          py::arg("num_sources") = 1, py::arg("with_flares") = true, py::arg("background") = -1,
          "Random synthetic scene: (image, gt_mask, flare_points).");

    m.def("dice",
          [](const py::array_t<std::uint8_t, py::array::c_style>& a,
             const py::array_t<std::uint8_t, py::array::c_style>& b) {
              return dice(mask_from_array(a), mask_from_array(b));
          },
          py::arg("mask"), py::arg("gt_mask"), "Dice similarity coefficient of two masks.");

    m.def("precision_recall_f",
          [](long long tp, long long fp, long long fn) {
              const auto r = precision_recall_f(tp, fp, fn);
              return py::make_tuple(r.precision, r.recall, r.fMeasure);
          },
          py::arg("tp"), py::arg("fp"), py::arg("fn"));

#ifdef FLARESPOT_VERSION
    m.attr("__version__") = FLARESPOT_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
