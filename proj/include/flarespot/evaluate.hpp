#pragma once

#include <optional>
#include <vector>

#include "flarespot/detector.hpp"
#include "flarespot/morphology.hpp"

namespace flarespot {

/// Ground truth for one image: the reference flare mask, optionally with the
/// planted flare centers.
struct GroundTruth {
    BinaryMask flareMask;
    std::vector<Point> flarePoints;
};

struct MatchCounts {
    int tp = 0;
    int fp = 0;
    int fn = 0;
};

/// Per-image evaluation record.
struct ImageScore {
    MatchCounts counts;
    std::optional<double> dice;  // present only when the image has >= 1 true positive
};

/// Aggregate metrics over a dataset.
struct EvalReport {
    std::vector<ImageScore> perImage;
    double precision = 0.0;
    double recall = 0.0;
    double fMeasure = 0.0;
    double avgFalsePositives = 0.0;
    double avgDice = 0.0;     // over images with >= 1 true positive
    double medianDice = 0.0;  // same restriction
    std::size_t imagesWithDice = 0;
    std::vector<double> fpHistogram;  // percent of images with 0..14 FPs, last bin = 15+
};

/// Match detections to ground-truth components: a detection is a true
/// positive iff its flare point lies inside an 8-connected component of the
/// ground-truth mask, each component claimable once (greedy by confidence).
MatchCounts match_detections(const std::vector<FlareDetection>& dets, const GroundTruth& gt);

struct PrecisionRecallF {
    double precision = 0.0;
    double recall = 0.0;
    double fMeasure = 0.0;
};

/// Ratio metrics with the 0/0 -> 0 convention.
PrecisionRecallF precision_recall_f(long long tp, long long fp, long long fn);

/// Dice similarity coefficient 2|A&B| / (|A|+|B|).
/// Throws BothEmptyError when both masks are empty.
double dice(const BinaryMask& m, const BinaryMask& gt);

/// Pool counts across images (not mean-of-ratios); Dice statistics restricted
/// to images with at least one true positive; FP histogram over bins 0..15+.
EvalReport aggregate(const std::vector<ImageScore>& scores);

}  // namespace flarespot
