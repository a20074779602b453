#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flarespot/detector.hpp"
#include "flarespot/evaluate.hpp"
#include "flarespot/flaremask.hpp"
#include "flarespot/inpaint.hpp"
#include "flarespot/synthgen.hpp"

namespace flarespot {

/// Batch configuration: pipeline parameters plus I/O and emission options.
struct RunConfig {
    PipelineParams params;
    int patchSide = 7;
    int inpaintLevels = 0;
    int inpaintIterations = 10;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool emitMask = true;
    bool emitOverlay = false;
    bool emitReport = true;
    bool emitDebug = false;
    bool emitInpainted = true;
    std::vector<std::string> inputs;
    std::string outputDir = ".";
};

/// Outcome of the detection + mask (+ optional inpaint) pass on one image.
struct ImageResult {
    std::size_t numSources = 0;
    std::vector<FlareDetection> detections;
    std::vector<FlareRegion> regions;
    BinaryMask mask;  // merged flare mask (all-zero when nothing detected)
    std::optional<RgbImage> restored;
    std::string status;  // "ok", "no light source", "no flare detected"
};

/// Run detection, flare-mask construction and (optionally) inpainting on a
/// decoded image.
ImageResult process_image(const RgbImage& img, const RunConfig& config, bool doInpaint);

/// Batch flare removal. Per input image writes <stem>_restored.png plus the
/// requested artifacts under config.outputDir; images without detections pass
/// through with identical pixels. Returns 0 on success, 1 when at least one
/// input failed to process.
int run_remove(const RunConfig& config);

/// Detection-only batch (no inpainting); writes reports and optional masks.
int run_detect(const RunConfig& config, bool emitMaskArtifacts);

struct EvalConfig {
    PipelineParams params;
    std::string manifestPath;
    std::string outputDir = ".";
    std::uint64_t seed = 1;
    int jobs = 1;
};

/// Test-only hook to rewrite the detections of image #i before scoring.
using EvalHook = std::function<void(std::size_t, std::vector<FlareDetection>&)>;

/// Score the pipeline against a manifest of (image, ground-truth mask) rows.
/// Writes report.json and fp_histogram.csv to the output directory. Throws
/// ManifestError on an empty manifest or unresolvable row.
EvalReport run_eval(const EvalConfig& config, const EvalHook& hook = {});

struct SynthConfig {
    std::string outputDir = ".";
    int count = 20;
    std::uint64_t seed = 1;
    int width = 256;
    int height = 256;
    bool withFlares = true;
};

/// Emit a synthetic corpus: scene_NNNN.png, scene_NNNN_gt.png and a
/// manifest.tsv referencing them.
void run_synth(const SynthConfig& config);

/// Apply `key=value` lines from a config file onto a RunConfig. Unknown keys
/// raise ConfigError. Lines starting with '#' and blank lines are ignored.
void apply_config_file(const std::string& path, RunConfig& config);

/// Mask boundary drawn in red over the image, detections crossed in green.
RgbImage make_overlay(const RgbImage& img, const BinaryMask& mask,
                      const std::vector<FlareDetection>& dets);

}  // namespace flarespot
