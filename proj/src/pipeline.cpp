#include "flarespot/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "flarespot/color.hpp"
#include "flarespot/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace flarespot {

namespace {

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

json detection_json(const FlareDetection& d) {
    return json{
        {"source", json{{"centroid", {d.source.centroid.x, d.source.centroid.y}},
                        {"area", d.source.area}}},
        {"flare_point", {d.flarePoint.x, d.flarePoint.y}},
        {"scale", d.scale},
        {"confidence", d.confidence},
        {"e_raw", {d.candidate.e1, d.candidate.e2, d.candidate.e3}},
        {"e_norm", {d.candidate.e1n, d.candidate.e2n, d.candidate.e3n}},
    };
}

json image_report(const std::string& input, const ImageResult& result) {
    json dets = json::array();
    for (const FlareDetection& d : result.detections) dets.push_back(detection_json(d));
    return json{{"image", input},
                {"status", result.status},
                {"light_sources", result.numSources},
                {"detections", dets}};
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

void emit_debug_artifacts(const RgbImage& img, const LabImage& lab, const RunConfig& config,
                          const std::string& prefix) {
    const BinaryMask bright =
        opening(upper_level_set(lab.L, config.params.iota), config.params.openingRadius);
    RgbImage sourcesOverlay = img;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!bright.get(x, y)) continue;
            sourcesOverlay.at(x, y, 0) = 255;
            sourcesOverlay.at(x, y, 1) = sourcesOverlay.at(x, y, 1) / 2;
            sourcesOverlay.at(x, y, 2) = sourcesOverlay.at(x, y, 2) / 2;
        }
    }
    for (const LightSource& s : find_light_sources(lab, config.params.iota,
                                                   config.params.secondaryRatio,
                                                   config.params.openingRadius,
                                                   config.params.maxSources)) {
        const int cx = static_cast<int>(std::lround(s.centroid.x));
        const int cy = static_cast<int>(std::lround(s.centroid.y));
        for (int t = -4; t <= 4; ++t) {
            if (sourcesOverlay.inside(cx + t, cy)) {
                sourcesOverlay.at(cx + t, cy, 0) = 0;
                sourcesOverlay.at(cx + t, cy, 1) = 255;
                sourcesOverlay.at(cx + t, cy, 2) = 0;
            }
            if (sourcesOverlay.inside(cx, cy + t)) {
                sourcesOverlay.at(cx, cy + t, 0) = 0;
                sourcesOverlay.at(cx, cy + t, 1) = 255;
                sourcesOverlay.at(cx, cy + t, 2) = 0;
            }
        }
    }
    write_png(prefix + "_debug_sources.png", sourcesOverlay);

    try {
        const ScaleSpace ss = build_scalespace(lab.L, config.params.sigmaMin,
                                               config.params.sigmaMax, config.params.k);
        for (std::size_t i = 0; i < ss.dogs.size(); ++i) {
            std::ostringstream name;
            name << prefix << "_debug_dog_" << i << ".png";
            write_png_normalized(name.str(), ss.dogs[i].plane);
        }
    } catch (const ImageTooSmallError&) {
        // nothing to dump for tiny images
    }
}

// Run fn(i) for i in [0, n) on `jobs` workers. Exceptions propagate as a
// per-index failure flag via fn's return value.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const int workers = std::max(1, jobs);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace

ImageResult process_image(const RgbImage& img, const RunConfig& config, bool doInpaint) {
    ImageResult result;
    const LabImage lab = rgb_to_lab(img);
    result.detections = detect_all(lab, config.params, &result.numSources);
    result.mask = BinaryMask(img.width(), img.height());

    if (result.numSources == 0) {
        result.status = "no light source";
        return result;
    }

    for (const FlareDetection& det : result.detections) {
        const Window win =
            search_window(det.source, img.width(), img.height(), config.params.windowFraction);
        auto region = build_flare_region(lab, det, config.params.delta, config.params.epsilon,
                                         config.params.alpha, win);
        if (region) result.regions.push_back(std::move(*region));
    }
    if (result.regions.empty()) {
        result.status = "no flare detected";
        return result;
    }

    result.status = "ok";
    result.mask = merge_masks(result.regions, img.width(), img.height());

    if (doInpaint) {
        InpaintProblem problem;
        problem.image = img;
        problem.hole = result.mask;
        problem.patchSide = config.patchSide;
        problem.levels = config.inpaintLevels;
        problem.iterations = config.inpaintIterations;
        problem.seed = config.seed;
        result.restored = inpaint(problem);
    }
    return result;
}

RgbImage make_overlay(const RgbImage& img, const BinaryMask& mask,
                      const std::vector<FlareDetection>& dets) {
    RgbImage out = img;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            const bool boundary = x == 0 || x == mask.width() - 1 || y == 0 ||
                                  y == mask.height() - 1 || !mask.get(x - 1, y) ||
                                  !mask.get(x + 1, y) || !mask.get(x, y - 1) ||
                                  !mask.get(x, y + 1);
            if (boundary) {
                out.at(x, y, 0) = 255;
                out.at(x, y, 1) = 0;
                out.at(x, y, 2) = 0;
            }
        }
    }
    for (const FlareDetection& d : dets) {
        for (int t = -3; t <= 3; ++t) {
            if (out.inside(d.flarePoint.x + t, d.flarePoint.y)) {
                out.at(d.flarePoint.x + t, d.flarePoint.y, 0) = 0;
                out.at(d.flarePoint.x + t, d.flarePoint.y, 1) = 255;
                out.at(d.flarePoint.x + t, d.flarePoint.y, 2) = 0;
            }
            if (out.inside(d.flarePoint.x, d.flarePoint.y + t)) {
                out.at(d.flarePoint.x, d.flarePoint.y + t, 0) = 0;
                out.at(d.flarePoint.x, d.flarePoint.y + t, 1) = 255;
                out.at(d.flarePoint.x, d.flarePoint.y + t, 2) = 0;
            }
        }
    }
    return out;
}

namespace {

int run_batch(const RunConfig& config, bool doInpaint, bool emitMaskArtifacts) {
    fs::create_directories(config.outputDir);
    std::vector<std::string> failures(config.inputs.size());

    parallel_for(config.inputs.size(), config.jobs, [&](std::size_t i) {
        const std::string& input = config.inputs[i];
        try {
            const RgbImage img = read_image(input);
            const ImageResult result = process_image(img, config, doInpaint);
            const std::string prefix =
                (fs::path(config.outputDir) / stem_of(input)).string();

            if (doInpaint) {
                // Pass-through when nothing was detected: identical pixels.
                write_png(prefix + "_restored.png",
                          result.restored ? *result.restored : img);
            }
            if (emitMaskArtifacts && config.emitMask)
                write_png(prefix + "_mask.png", result.mask);
            if (emitMaskArtifacts && config.emitOverlay)
                write_png(prefix + "_overlay.png",
                          make_overlay(img, result.mask, result.detections));
            if (config.emitReport)
                write_text(prefix + "_report.json", image_report(input, result).dump(2) + "\n");
            if (config.emitDebug)
                emit_debug_artifacts(img, rgb_to_lab(img), config, prefix);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    int status = 0;
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i].empty()) {
            std::cerr << "error: " << config.inputs[i] << ": " << failures[i] << "\n";
            status = 1;
        }
    }
    return status;
}

}  // namespace

int run_remove(const RunConfig& config) { return run_batch(config, true, true); }

int run_detect(const RunConfig& config, bool emitMaskArtifacts) {
    return run_batch(config, false, emitMaskArtifacts);
}

EvalReport run_eval(const EvalConfig& config, const EvalHook& hook) {
    std::ifstream manifest(config.manifestPath);
    if (!manifest) throw ManifestError("cannot open manifest " + config.manifestPath);

    const fs::path base = fs::path(config.manifestPath).parent_path();
    struct Row {
        std::string image;
        std::string gtMask;
    };
    std::vector<Row> rows;
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string imagePath, maskPath, extra;
        if (!(ss >> imagePath >> maskPath) || (ss >> extra))
            throw ManifestError("malformed manifest row: " + line);
        rows.push_back({(base / imagePath).string(), (base / maskPath).string()});
    }
    if (rows.empty()) throw ManifestError("manifest has no rows: " + config.manifestPath);
    for (const Row& r : rows) {
        if (!fs::exists(r.image)) throw ManifestError("missing image: " + r.image);
        if (!fs::exists(r.gtMask)) throw ManifestError("missing ground-truth mask: " + r.gtMask);
    }

    RunConfig rc;
    rc.params = config.params;
    rc.seed = config.seed;

    std::vector<ImageScore> scores(rows.size());
    std::vector<std::string> failures(rows.size());
    parallel_for(rows.size(), config.jobs, [&](std::size_t i) {
        try {
            const RgbImage img = read_image(rows[i].image);
            GroundTruth gt;
            gt.flareMask = read_mask(rows[i].gtMask);
            ImageResult result = process_image(img, rc, false);
            if (hook) hook(i, result.detections);

            ImageScore score;
            score.counts = match_detections(result.detections, gt);
            if (score.counts.tp >= 1) {
                const BinaryMask& predicted = result.mask;
                if (predicted.count() + gt.flareMask.count() > 0)
                    score.dice = dice(predicted, gt.flareMask);
            }
            scores[i] = score;
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw ManifestError("failed on " + rows[i].image + ": " + failures[i]);

    const EvalReport report = aggregate(scores);

    fs::create_directories(config.outputDir);
    json perImage = json::array();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        json entry{{"image", rows[i].image},
                   {"tp", scores[i].counts.tp},
                   {"fp", scores[i].counts.fp},
                   {"fn", scores[i].counts.fn}};
        if (scores[i].dice) entry["dice"] = *scores[i].dice;
        perImage.push_back(entry);
    }
    json doc{{"per_image", perImage},
             {"aggregate",
              json{{"images", scores.size()},
                   {"precision", report.precision},
                   {"recall", report.recall},
                   {"f_measure", report.fMeasure},
                   {"avg_false_positives", report.avgFalsePositives},
                   {"avg_dice", report.avgDice},
                   {"median_dice", report.medianDice},
                   {"images_with_dice", report.imagesWithDice}}}};
    write_text((fs::path(config.outputDir) / "report.json").string(), doc.dump(2) + "\n");

    std::ostringstream hist;
    hist << "false_positives,percent\n";
    for (std::size_t b = 0; b < report.fpHistogram.size(); ++b)
        hist << (b + 1 == report.fpHistogram.size() ? "15+" : std::to_string(b)) << ","
             << report.fpHistogram[b] << "\n";
    write_text((fs::path(config.outputDir) / "fp_histogram.csv").string(), hist.str());

    return report;
}

void run_synth(const SynthConfig& config) {
    fs::create_directories(config.outputDir);
    std::mt19937_64 rng(config.seed);
    std::ostringstream manifest;

    for (int i = 0; i < config.count; ++i) {
        SceneOptions opts;
        opts.width = config.width;
        opts.height = config.height;
        opts.withFlares = config.withFlares;
        opts.numSources = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.7 ? 1 : 2;
        const SceneSpec spec = make_random_scene(rng, opts);
        const auto [img, gt] = render(spec);

        char name[32];
        std::snprintf(name, sizeof(name), "scene_%04d", i);
        const std::string imgName = std::string(name) + ".png";
        const std::string gtName = std::string(name) + "_gt.png";
        write_png((fs::path(config.outputDir) / imgName).string(), img);
        write_png((fs::path(config.outputDir) / gtName).string(), gt.flareMask);
        manifest << imgName << "\t" << gtName << "\n";
    }
    write_text((fs::path(config.outputDir) / "manifest.tsv").string(), manifest.str());
}

void apply_config_file(const std::string& path, RunConfig& config) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineNo) + " is not key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "iota") config.params.iota = std::stod(value);
            else if (key == "sigma_min") config.params.sigmaMin = std::stod(value);
            else if (key == "sigma_max") config.params.sigmaMax = std::stod(value);
            else if (key == "delta") config.params.delta = std::stod(value);
            else if (key == "beta") config.params.beta = std::stod(value);
            else if (key == "epsilon") config.params.epsilon = std::stod(value);
            else if (key == "alpha") config.params.alpha = std::stod(value);
            else if (key == "k") config.params.k = std::stod(value);
            else if (key == "window_fraction") config.params.windowFraction = std::stod(value);
            else if (key == "secondary_ratio") config.params.secondaryRatio = std::stod(value);
            else if (key == "opening_radius") config.params.openingRadius = std::stod(value);
            else if (key == "max_sources") config.params.maxSources = std::stoul(value);
            else if (key == "patch_side") config.patchSide = std::stoi(value);
            else if (key == "inpaint_levels") config.inpaintLevels = std::stoi(value);
            else if (key == "inpaint_iterations") config.inpaintIterations = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "jobs") config.jobs = std::stoi(value);
            else throw ConfigError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError("invalid value for " + key + ": " + value);
        }
    }
}

}  // namespace flarespot
