#include "flarespot/evaluate.hpp"

#include <algorithm>
#include <numeric>

namespace flarespot {

MatchCounts match_detections(const std::vector<FlareDetection>& dets, const GroundTruth& gt) {
    const std::vector<Component> gtComps = connected_components(gt.flareMask);

    // Label grid: which GT component covers each pixel.
    std::vector<int> label(gt.flareMask.bits().size(), -1);
    for (std::size_t ci = 0; ci < gtComps.size(); ++ci)
        for (const Pixel& p : gtComps[ci].pixels)
            label[static_cast<std::size_t>(p.y) * gt.flareMask.width() + p.x] =
                static_cast<int>(ci);

    // Greedy matching by decreasing confidence, stable on ties.
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets[a].confidence > dets[b].confidence;
    });

    std::vector<std::uint8_t> claimed(gtComps.size(), 0);
    MatchCounts counts;
    for (std::size_t i : order) {
        const Pixel p = dets[i].flarePoint;
        int ci = -1;
        if (gt.flareMask.inside(p.x, p.y))
            ci = label[static_cast<std::size_t>(p.y) * gt.flareMask.width() + p.x];
        if (ci >= 0 && !claimed[ci]) {
            claimed[ci] = 1;
            ++counts.tp;
        } else {
            ++counts.fp;
        }
    }
    counts.fn = static_cast<int>(gtComps.size()) - counts.tp;
    return counts;
}

PrecisionRecallF precision_recall_f(long long tp, long long fp, long long fn) {
    PrecisionRecallF out;
    out.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    out.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    out.fMeasure = (out.precision + out.recall) > 0.0
                       ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                       : 0.0;
    return out;
}

double dice(const BinaryMask& m, const BinaryMask& gt) {
    if (m.width() != gt.width() || m.height() != gt.height())
        throw OutOfBoundsError("dice: mask dimensions differ");
    std::size_t inter = 0;
    for (std::size_t i = 0; i < m.bits().size(); ++i)
        inter += (m.bits()[i] & gt.bits()[i]);
    const std::size_t total = m.count() + gt.count();
    if (total == 0) throw BothEmptyError("dice: both masks are empty");
    return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

EvalReport aggregate(const std::vector<ImageScore>& scores) {
    EvalReport rep;
    rep.perImage = scores;

    long long tp = 0, fp = 0, fn = 0;
    std::vector<double> dices;
    rep.fpHistogram.assign(16, 0.0);
    for (const ImageScore& s : scores) {
        tp += s.counts.tp;
        fp += s.counts.fp;
        fn += s.counts.fn;
        rep.fpHistogram[std::min(s.counts.fp, 15)] += 1.0;
        if (s.counts.tp >= 1 && s.dice.has_value()) dices.push_back(*s.dice);
    }

    const auto prf = precision_recall_f(tp, fp, fn);
    rep.precision = prf.precision;
    rep.recall = prf.recall;
    rep.fMeasure = prf.fMeasure;
    rep.avgFalsePositives =
        scores.empty() ? 0.0 : static_cast<double>(fp) / static_cast<double>(scores.size());
    for (double& bin : rep.fpHistogram)
        bin = scores.empty() ? 0.0 : 100.0 * bin / static_cast<double>(scores.size());

    rep.imagesWithDice = dices.size();
    if (!dices.empty()) {
        rep.avgDice = std::accumulate(dices.begin(), dices.end(), 0.0) /
                      static_cast<double>(dices.size());
        std::sort(dices.begin(), dices.end());
        const std::size_t n = dices.size();
        rep.medianDice =
            (n % 2 == 1) ? dices[n / 2] : (dices[n / 2 - 1] + dices[n / 2]) / 2.0;
    }
    return rep;
}

}  // namespace flarespot
