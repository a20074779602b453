#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "flarespot/io.hpp"
#include "flarespot/pipeline.hpp"

namespace {

using flarespot::RunConfig;

// Deferred parameter overrides so precedence is defaults < config file < flags.
struct ParamFlags {
    std::optional<double> iota, sigmaMin, sigmaMax, delta, beta, epsilon, alpha, k,
        windowFraction, secondaryRatio, openingRadius;
    std::optional<std::size_t> maxSources;
    std::optional<int> patchSide, inpaintLevels, inpaintIterations, jobs;
    std::optional<std::uint64_t> seed;
    std::string configPath;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", configPath, "key=value config file (Table parameters)");
        cmd->add_option("--iota", iota, "light source level set threshold");
        cmd->add_option("--sigma_min", sigmaMin, "minimum blob scale");
        cmd->add_option("--sigma_max", sigmaMax, "maximum blob scale");
        cmd->add_option("--delta", delta, "bi-level set radius");
        cmd->add_option("--beta", beta, "overexposure threshold");
        cmd->add_option("--epsilon", epsilon, "mask dilation radius");
        cmd->add_option("--alpha", alpha, "mask level set threshold");
        cmd->add_option("--k", k, "scale ladder ratio");
        cmd->add_option("--window_fraction", windowFraction, "search window radius fraction");
        cmd->add_option("--secondary_ratio", secondaryRatio, "secondary source area ratio");
        cmd->add_option("--opening_radius", openingRadius, "light source opening radius");
        cmd->add_option("--max_sources", maxSources, "maximum number of light sources");
        cmd->add_option("--patch_side", patchSide, "inpainting patch side (odd)");
        cmd->add_option("--inpaint_levels", inpaintLevels, "multiscale levels (0 = auto)");
        cmd->add_option("--inpaint_iterations", inpaintIterations, "iterations per level");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--jobs", jobs, "parallel worker count");
    }

    void apply(RunConfig& config) const {
        if (!configPath.empty()) flarespot::apply_config_file(configPath, config);
        if (iota) config.params.iota = *iota;
        if (sigmaMin) config.params.sigmaMin = *sigmaMin;
        if (sigmaMax) config.params.sigmaMax = *sigmaMax;
        if (delta) config.params.delta = *delta;
        if (beta) config.params.beta = *beta;
        if (epsilon) config.params.epsilon = *epsilon;
        if (alpha) config.params.alpha = *alpha;
        if (k) config.params.k = *k;
        if (windowFraction) config.params.windowFraction = *windowFraction;
        if (secondaryRatio) config.params.secondaryRatio = *secondaryRatio;
        if (openingRadius) config.params.openingRadius = *openingRadius;
        if (maxSources) config.params.maxSources = *maxSources;
        if (patchSide) config.patchSide = *patchSide;
        if (inpaintLevels) config.inpaintLevels = *inpaintLevels;
        if (inpaintIterations) config.inpaintIterations = *inpaintIterations;
        if (seed) config.seed = *seed;
        if (jobs) config.jobs = *jobs;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flare spot detection and removal"};
    app.require_subcommand(1);

    // remove / detect / mask share the batch options.
    struct BatchCmd {
        CLI::App* cmd = nullptr;
        ParamFlags flags;
        std::vector<std::string> inputs;
        std::string outputDir = ".";
        bool overlay = false;
        bool debug = false;
        bool noMask = false;
        bool noReport = false;
    };
    BatchCmd removeCmd, detectCmd, maskCmd;
    auto setupBatch = [&](BatchCmd& b, const char* name, const char* desc) {
        b.cmd = app.add_subcommand(name, desc);
        b.cmd->add_option("inputs", b.inputs, "input images (PNG or JPEG)")->required();
        b.cmd->add_option("-o,--output", b.outputDir, "output directory");
        b.cmd->add_flag("--overlay", b.overlay, "emit mask boundary overlays");
        b.cmd->add_flag("--debug", b.debug, "emit light source and DoG debug planes");
        b.cmd->add_flag("--no-mask", b.noMask, "skip mask artifacts");
        b.cmd->add_flag("--no-report", b.noReport, "skip JSON reports");
        b.flags.add_to(b.cmd);
    };
    setupBatch(removeCmd, "remove", "detect flare spots, build masks, inpaint them away");
    setupBatch(detectCmd, "detect", "detection reports only");
    setupBatch(maskCmd, "mask", "detection plus flare masks, no inpainting");

    auto* inpaintCmd = app.add_subcommand("inpaint", "fill a masked region of one image");
    std::string inImage, inMask, inOut = "inpainted.png";
    ParamFlags inpaintFlags;
    inpaintCmd->add_option("image", inImage, "input image")->required();
    inpaintCmd->add_option("mask", inMask, "hole mask PNG (255 = fill)")->required();
    inpaintCmd->add_option("-o,--output", inOut, "output PNG");
    inpaintFlags.add_to(inpaintCmd);

    auto* synthCmd = app.add_subcommand("synth", "emit a synthetic corpus with ground truth");
    flarespot::SynthConfig synthConfig;
    bool synthNoFlares = false;
    synthCmd->add_option("-o,--output", synthConfig.outputDir, "corpus directory");
    synthCmd->add_option("--count", synthConfig.count, "number of scenes");
    synthCmd->add_option("--seed", synthConfig.seed, "random seed");
    synthCmd->add_option("--width", synthConfig.width, "scene width");
    synthCmd->add_option("--height", synthConfig.height, "scene height");
    synthCmd->add_flag("--no-flares", synthNoFlares, "negative-control corpus");

    auto* evalCmd = app.add_subcommand("eval", "score detection + masks against ground truth");
    std::string manifestPath;
    std::string evalOut = ".";
    ParamFlags evalFlags;
    evalCmd->add_option("manifest", manifestPath, "manifest: image<TAB>gt_mask per line")
        ->required();
    evalCmd->add_option("-o,--output", evalOut, "output directory");
    evalFlags.add_to(evalCmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        auto buildConfig = [](const BatchCmd& b) {
            RunConfig config;
            b.flags.apply(config);
            config.inputs = b.inputs;
            config.outputDir = b.outputDir;
            config.emitOverlay = b.overlay;
            config.emitDebug = b.debug;
            config.emitMask = !b.noMask;
            config.emitReport = !b.noReport;
            return config;
        };

        if (removeCmd.cmd->parsed()) return flarespot::run_remove(buildConfig(removeCmd));
        if (detectCmd.cmd->parsed()) return flarespot::run_detect(buildConfig(detectCmd), false);
        if (maskCmd.cmd->parsed()) return flarespot::run_detect(buildConfig(maskCmd), true);

        if (inpaintCmd->parsed()) {
            RunConfig config;
            inpaintFlags.apply(config);
            flarespot::InpaintProblem problem;
            problem.image = flarespot::read_image(inImage);
            problem.hole = flarespot::read_mask(inMask);
            problem.patchSide = config.patchSide;
            problem.levels = config.inpaintLevels;
            problem.iterations = config.inpaintIterations;
            problem.seed = config.seed;
            flarespot::write_png(inOut, flarespot::inpaint(problem));
            return 0;
        }

        if (synthCmd->parsed()) {
            synthConfig.withFlares = !synthNoFlares;
            flarespot::run_synth(synthConfig);
            return 0;
        }

        if (evalCmd->parsed()) {
            flarespot::EvalConfig config;
            RunConfig rc;
            evalFlags.apply(rc);
            config.params = rc.params;
            config.seed = rc.seed;
            config.jobs = rc.jobs;
            config.manifestPath = manifestPath;
            config.outputDir = evalOut;
            const flarespot::EvalReport report = flarespot::run_eval(config);
            std::cout << "images: " << report.perImage.size()
                      << "  precision: " << report.precision << "  recall: " << report.recall
                      << "  f-measure: " << report.fMeasure
                      << "  avg FP: " << report.avgFalsePositives
                      << "  avg dice: " << report.avgDice
                      << "  median dice: " << report.medianDice << "\n";
            return 0;
        }
    } catch (const flarespot::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const flarespot::ManifestError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
