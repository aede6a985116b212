// srtool: train sparse super-resolution dictionaries, upscale images with
// them, and evaluate results against ground truth.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssr/dict_io.hpp"
#include "ssr/errors.hpp"
#include "ssr/image_io.hpp"
#include "ssr/metrics.hpp"
#include "ssr/resize.hpp"
#include "ssr/sr_engine.hpp"

namespace fs = std::filesystem;
using namespace ssr;

namespace {

struct GeometryFlags {
    int lr_patch = 5;
    int scale = 2;
    int lr_stride = 1;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--lr-patch", lr_patch, "LR patch side length in pixels")
            ->capture_default_str();
        cmd->add_option("--scale", scale, "Upscaling factor")->capture_default_str();
        cmd->add_option("--stride", lr_stride, "LR patch sampling stride")->capture_default_str();
    }

    PatchGeometry geometry() const {
        PatchGeometry g{lr_patch, scale, lr_stride};
        g.validate();
        return g;
    }
};

struct SolverFlags {
    int max_iterations = 1000;
    double tolerance = 1e-6;
    double zero_threshold = 1e-10;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--solver-iterations", max_iterations,
                        "Coordinate-descent sweep limit per signal")
            ->capture_default_str();
        cmd->add_option("--solver-tolerance", tolerance, "Relative objective-change stop")
            ->capture_default_str();
        cmd->add_option("--zero-threshold", zero_threshold,
                        "Coefficients below this snap to exact zero")
            ->capture_default_str();
    }

    SolverSettings settings() const {
        SolverSettings s{max_iterations, tolerance, zero_threshold};
        s.validate();
        return s;
    }
};

std::vector<fs::path> list_corpus(const std::string& dir) {
    fs::path root(dir);
    if (!fs::is_directory(root))
        throw invalid_input_error("corpus path is not a readable directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        if (ext == ".png" || ext == ".pgm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw invalid_input_error("no .png or .pgm images found in corpus directory " + dir);
    return files;
}

std::uint64_t fnv1a64(std::uint64_t h, const void* data, std::size_t n) {
    auto p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

// Hashed sorted by filename, so the digest is directory-order independent.
std::string corpus_digest(const std::vector<fs::path>& files) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& f : files) {
        std::string name = f.filename().string();
        h = fnv1a64(h, name.data(), name.size());
        std::ifstream in(f, std::ios::binary);
        if (!in) throw io_error("cannot read corpus file " + f.string());
        char buf[65536];
        while (in.read(buf, sizeof buf) || in.gcount() > 0)
            h = fnv1a64(h, buf, static_cast<std::size_t>(in.gcount()));
    }
    char out[19];
    std::snprintf(out, sizeof out, "%016" PRIx64, h);
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double now_minus(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GrayImage modcrop(const GrayImage& im, int scale) {
    auto s = static_cast<std::size_t>(scale);
    std::size_t rows = im.rows - im.rows % s;
    std::size_t cols = im.cols - im.cols % s;
    if (rows == im.rows && cols == im.cols) return im;
    GrayImage out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = im.at(r, c);
    return out;
}

// ---- train ----

struct TrainArgs {
    std::string corpus_dir, out_path;
    std::string method = "decoupled";
    std::size_t dict_size = 1024;
    double lambda = 0.15;
    std::size_t patches = 80000;
    int iterations = 40;
    std::uint64_t seed = 0;
    double variance_floor = 10.0;
    double ridge_epsilon = -1.0; // negative = scale-aware automatic value
    bool block_weighting = false;
    std::string split_renorm = "lr";
    GeometryFlags geom;
    SolverFlags solver;
};

int cmd_train(const TrainArgs& a) {
    TrainConfig config;
    config.dict_size = a.dict_size;
    config.lambda = a.lambda;
    config.outer_iterations = a.iterations;
    config.solver = a.solver.settings();
    config.seed = a.seed;
    if (a.ridge_epsilon >= 0.0) config.ridge_epsilon = a.ridge_epsilon;
    config.block_weighting = a.block_weighting;
    if (a.split_renorm == "lr") config.split_renorm = SplitRenorm::lr_only;
    else if (a.split_renorm == "both") config.split_renorm = SplitRenorm::both;
    else if (a.split_renorm == "none") config.split_renorm = SplitRenorm::none;
    else throw invalid_input_error("--split-renorm must be lr, both or none");
    config.validate();

    PatchGeometry geom = a.geom.geometry();
    TrainMethod method = parse_train_method(a.method);

    auto files = list_corpus(a.corpus_dir);
    std::string digest = corpus_digest(files);
    std::vector<GrayImage> corpus;
    corpus.reserve(files.size());
    for (const auto& f : files) corpus.push_back(read_image(f.string()).gray);
    std::fprintf(stderr, "corpus: %zu images from %s (digest %s)\n", corpus.size(),
                 a.corpus_dir.c_str(), digest.c_str());

    auto t0 = std::chrono::steady_clock::now();
    TrainingPairs pairs = sample_training_pairs(corpus, geom, a.patches, a.variance_floor, a.seed);
    std::fprintf(stderr, "sampled %zu patch pairs in %.2f s\n", pairs.lr.count(), now_minus(t0));

    t0 = std::chrono::steady_clock::now();
    DictionaryPair pair;
    pair.geometry = geom;
    pair.lambda = config.lambda;
    pair.method = method;
    double final_objective;
    if (method == TrainMethod::joint) {
        JointTrainResult r = joint_train(pairs.lr, pairs.hr, config);
        pair.d_lo = std::move(r.d_lo);
        pair.d_hi = std::move(r.d_hi);
        final_objective = r.trace.after_update.back();
    } else {
        DecoupledTrainResult r = decoupled_train(pairs.lr, pairs.hr, config);
        pair.d_lo = std::move(r.d_lo);
        pair.d_hi = std::move(r.d_hi);
        final_objective = r.trace.after_update.back();
    }
    double t_train = now_minus(t0);

    pair.meta.emplace_back("seed", std::to_string(a.seed));
    pair.meta.emplace_back("patches", std::to_string(a.patches));
    pair.meta.emplace_back("outer_iterations", std::to_string(a.iterations));
    pair.meta.emplace_back("variance_floor", fmt_double(a.variance_floor));
    if (method == TrainMethod::decoupled)
        pair.meta.emplace_back("ridge_epsilon",
                               a.ridge_epsilon >= 0.0 ? fmt_double(a.ridge_epsilon) : "auto");
    pair.meta.emplace_back("block_weighting", a.block_weighting ? "1" : "0");
    pair.meta.emplace_back("split_renorm", a.split_renorm);
    pair.meta.emplace_back("solver_iterations", std::to_string(config.solver.max_iterations));
    pair.meta.emplace_back("solver_tolerance", fmt_double(config.solver.tolerance));
    pair.meta.emplace_back("zero_threshold", fmt_double(config.solver.zero_threshold));
    pair.meta.emplace_back("corpus_digest", digest);
    pair.meta.emplace_back("final_objective", fmt_double(final_objective));
    pair.meta.emplace_back("tool", "srtool");

    write_dict_file(a.out_path, pair);
    std::fprintf(stderr, "training: %.2f s, final objective %.6g\n", t_train, final_objective);
    std::fprintf(stdout, "wrote %s (%zu atoms, method %s)\n", a.out_path.c_str(), pair.d_lo.size(),
                 train_method_name(method));
    return 0;
}

// ---- sr ----

struct SrArgs {
    std::string dict_path, in_path, out_path;
    std::string dump_codes;
    bool luma_only = false;
    SolverFlags solver;
};

void write_codes_csv(const std::string& path, const std::vector<PatchCodeInfo>& codes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw io_error("cannot open " + path);
    std::fprintf(f, "row,col,nnz,residual\n");
    for (const auto& c : codes)
        std::fprintf(f, "%zu,%zu,%" PRIu32 ",%.6f\n", c.row, c.col, c.nnz, c.residual);
    std::fclose(f);
}

int cmd_sr(const SrArgs& a) {
    DictionaryPair pair = read_dict_file(a.dict_path);
    LoadedImage in = read_image(a.in_path);
    SolverSettings settings = a.solver.settings();
    bool dump = !a.dump_codes.empty();

    SparsityStats stats;
    StageTimings timing;
    if (in.is_color && !a.luma_only) {
        SRColorResult r = super_resolve_color(in.color, pair, settings, dump);
        write_color(a.out_path, r.image);
        stats = r.sparsity;
        timing = r.timing;
        if (dump) write_codes_csv(a.dump_codes, r.codes);
    } else {
        SRResult r = super_resolve(in.gray, pair, settings, dump);
        write_gray(a.out_path, r.image);
        stats = r.sparsity;
        timing = r.timing;
        if (dump) write_codes_csv(a.dump_codes, r.codes);
    }

    std::fprintf(stderr, "patches %zu | nnz mean %.2f min %u max %u | nonconverged %.3f%%\n",
                 stats.patches, stats.mean_nnz, stats.min_nnz, stats.max_nnz,
                 100.0 * stats.nonconverged_fraction);
    std::fprintf(stderr,
                 "timing: extract %.3f s, code %.3f s, reconstruct %.3f s, assemble %.3f s, "
                 "total %.3f s\n",
                 timing.extract_s, timing.code_s, timing.reconstruct_s, timing.assemble_s,
                 timing.total_s);
    std::fprintf(stdout, "wrote %s\n", a.out_path.c_str());
    return 0;
}

// ---- eval ----

struct EvalArgs {
    std::vector<std::string> gt_paths;
    std::vector<std::string> dict_paths;
    std::vector<std::string> compares; // name=file1,file2,... aligned with gt list
    std::string csv_path;
    bool crop_border_flag = false;
    SolverFlags solver;
};

struct EvalColumn {
    std::string name;
    std::vector<double> psnr, ssim; // per ground-truth image
};

int cmd_eval(const EvalArgs& a) {
    if (a.gt_paths.empty()) throw invalid_input_error("eval: at least one --gt image is required");

    std::vector<DictionaryPair> dicts;
    for (const auto& p : a.dict_paths) dicts.push_back(read_dict_file(p));
    int scale = dicts.empty() ? 2 : dicts.front().geometry.scale;
    for (const auto& d : dicts)
        if (d.geometry.scale != scale)
            throw invalid_input_error("eval: dictionaries disagree on the scale factor");

    struct Compare {
        std::string name;
        std::vector<std::string> files;
    };
    std::vector<Compare> compares;
    for (const auto& spec : a.compares) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw invalid_input_error("eval: --compare expects name=file[,file...]: " + spec);
        Compare c;
        c.name = spec.substr(0, eq);
        std::string rest = spec.substr(eq + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            c.files.push_back(rest.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (c.files.size() != a.gt_paths.size())
            throw invalid_input_error("eval: --compare " + c.name + " lists " +
                                      std::to_string(c.files.size()) + " files for " +
                                      std::to_string(a.gt_paths.size()) + " ground-truth images");
        compares.push_back(std::move(c));
    }

    SolverSettings settings = a.solver.settings();

    std::vector<std::string> row_names;
    EvalColumn bicubic{"Bicubic", {}, {}};
    std::vector<EvalColumn> dict_cols;
    for (std::size_t i = 0; i < dicts.size(); ++i) {
        std::string name = train_method_name(dicts[i].method);
        name[0] = static_cast<char>(std::toupper(name[0]));
        dict_cols.push_back({name, {}, {}});
    }
    std::vector<EvalColumn> cmp_cols;
    for (const auto& c : compares) cmp_cols.push_back({c.name, {}, {}});

    auto score = [&](EvalColumn& col, const GrayImage& out, const GrayImage& gt) {
        const GrayImage* x = &out;
        const GrayImage* g = &gt;
        GrayImage xc, gc;
        if (a.crop_border_flag) {
            xc = crop_border(out, static_cast<std::size_t>(scale));
            gc = crop_border(gt, static_cast<std::size_t>(scale));
            x = &xc;
            g = &gc;
        }
        col.psnr.push_back(psnr(*x, *g));
        col.ssim.push_back(ssim(*x, *g));
    };

    for (std::size_t i = 0; i < a.gt_paths.size(); ++i) {
        GrayImage gt = modcrop(read_image(a.gt_paths[i]).gray, scale);
        GrayImage lr = degrade(gt, scale);
        row_names.push_back(fs::path(a.gt_paths[i]).stem().string());

        score(bicubic, bicubic_upscale(lr, scale), gt);
        for (std::size_t d = 0; d < dicts.size(); ++d)
            score(dict_cols[d], super_resolve(lr, dicts[d], settings).image, gt);
        for (std::size_t c = 0; c < compares.size(); ++c) {
            GrayImage out = read_image(compares[c].files[i]).gray;
            if (out.rows != gt.rows || out.cols != gt.cols)
                throw invalid_input_error("eval: " + compares[c].files[i] +
                                          " dimensions do not match the cropped ground truth");
            score(cmp_cols[c], out, gt);
        }
    }

    std::vector<const EvalColumn*> cols;
    cols.push_back(&bicubic);
    for (const auto& c : dict_cols) cols.push_back(&c);
    for (const auto& c : cmp_cols) cols.push_back(&c);

    auto value_of = [](const EvalColumn& c, const std::string& metric, std::size_t row,
                       std::size_t nrows) {
        const std::vector<double>& v = metric == "PSNR" ? c.psnr : c.ssim;
        if (row < nrows) return v[row];
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    std::size_t nrows = row_names.size();
    std::vector<std::string> all_rows = row_names;
    all_rows.push_back("Average");

    std::size_t name_w = 5;
    for (const auto& r : all_rows) name_w = std::max(name_w, r.size());

    std::printf("%-*s  %-6s", static_cast<int>(name_w), "Image", "Metric");
    for (const auto* c : cols) std::printf("  %10s", c->name.c_str());
    std::printf("\n");
    for (std::size_t row = 0; row < all_rows.size(); ++row) {
        for (const char* metric : {"PSNR", "SSIM"}) {
            std::printf("%-*s  %-6s", static_cast<int>(name_w), all_rows[row].c_str(), metric);
            for (const auto* c : cols)
                std::printf("  %10.4f", value_of(*c, metric, row, nrows));
            std::printf("\n");
        }
    }

    if (!a.csv_path.empty()) {
        std::FILE* f = std::fopen(a.csv_path.c_str(), "wb");
        if (!f) throw io_error("cannot open " + a.csv_path);
        std::fprintf(f, "image,metric");
        for (const auto* c : cols) std::fprintf(f, ",%s", c->name.c_str());
        std::fprintf(f, "\n");
        for (std::size_t row = 0; row < all_rows.size(); ++row) {
            for (const char* metric : {"PSNR", "SSIM"}) {
                std::fprintf(f, "%s,%s", all_rows[row].c_str(), metric);
                for (const auto* c : cols)
                    std::fprintf(f, ",%.4f", value_of(*c, metric, row, nrows));
                std::fprintf(f, "\n");
            }
        }
        std::fclose(f);
    }
    return 0;
}

// ---- sample-patches ----

struct SampleArgs {
    std::string corpus_dir, out_path;
    std::size_t count = 80000;
    std::uint64_t seed = 0;
    double variance_floor = 10.0;
    GeometryFlags geom;
};

int cmd_sample_patches(const SampleArgs& a) {
    PatchGeometry geom = a.geom.geometry();
    auto files = list_corpus(a.corpus_dir);
    std::vector<GrayImage> corpus;
    for (const auto& f : files) corpus.push_back(read_image(f.string()).gray);

    TrainingPairs pairs = sample_training_pairs(corpus, geom, a.count, a.variance_floor, a.seed);

    std::FILE* f = std::fopen(a.out_path.c_str(), "wb");
    if (!f) throw io_error("cannot open " + a.out_path);
    std::size_t dl = pairs.lr.columns.rows;
    std::size_t dh = pairs.hr.columns.rows;
    std::fprintf(f, "index,lr_row,lr_col,mean");
    for (std::size_t i = 0; i < dl; ++i) std::fprintf(f, ",y%zu", i);
    for (std::size_t i = 0; i < dh; ++i) std::fprintf(f, ",x%zu", i);
    std::fprintf(f, "\n");
    for (std::size_t i = 0; i < pairs.lr.count(); ++i) {
        std::fprintf(f, "%zu,%zu,%zu,%s", i, pairs.lr.origins[i].first,
                     pairs.lr.origins[i].second, fmt_double(pairs.lr.means[i]).c_str());
        const double* y = pairs.lr.columns.col(i);
        for (std::size_t r = 0; r < dl; ++r) std::fprintf(f, ",%s", fmt_double(y[r]).c_str());
        const double* x = pairs.hr.columns.col(i);
        for (std::size_t r = 0; r < dh; ++r) std::fprintf(f, ",%s", fmt_double(x[r]).c_str());
        std::fprintf(f, "\n");
    }
    std::fclose(f);
    std::fprintf(stdout, "wrote %zu patch pairs to %s\n", pairs.lr.count(), a.out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse-coding single-image super-resolution"};
    app.require_subcommand(1);

    TrainArgs train;
    CLI::App* t = app.add_subcommand("train", "Train a dictionary pair from an image corpus");
    t->add_option("corpus", train.corpus_dir, "Directory of training images (.png/.pgm)")
        ->required();
    t->add_option("output", train.out_path, "Output dictionary file (.srdict)")->required();
    t->add_option("--method", train.method, "Training method: joint or decoupled")
        ->capture_default_str();
    t->add_option("--dict-size", train.dict_size, "Number of dictionary atoms K")
        ->capture_default_str();
    t->add_option("--lambda", train.lambda, "Sparsity weight")->capture_default_str();
    t->add_option("--patches", train.patches, "Training patch pairs to sample")
        ->capture_default_str();
    t->add_option("--iterations", train.iterations, "Outer training iterations")
        ->capture_default_str();
    t->add_option("--seed", train.seed, "RNG seed")->capture_default_str();
    t->add_option("--variance-floor", train.variance_floor,
                  "Minimum LR patch variance for training samples")
        ->capture_default_str();
    t->add_option("--ridge-epsilon", train.ridge_epsilon,
                  "Ridge term for the decoupled HR map solve (negative = automatic)")
        ->capture_default_str();
    t->add_flag("--block-weighting", train.block_weighting,
                "Weight stacked LR/HR blocks by 1/sqrt(dim) in joint training");
    t->add_option("--split-renorm", train.split_renorm,
                  "Joint split renormalization: lr, both or none")
        ->capture_default_str();
    train.geom.add_to(t);
    train.solver.add_to(t);

    SrArgs sr;
    CLI::App* s = app.add_subcommand("sr", "Super-resolve an image with a trained dictionary");
    s->add_option("dict", sr.dict_path, "Dictionary file (.srdict)")->required();
    s->add_option("input", sr.in_path, "LR input image")->required();
    s->add_option("output", sr.out_path, "Output image (.png/.pgm)")->required();
    s->add_option("--dump-codes", sr.dump_codes, "Write per-patch CSV: origin, nnz, residual");
    s->add_flag("--luma-only", sr.luma_only, "Treat color input as grayscale (luma)");
    sr.solver.add_to(s);

    EvalArgs ev;
    CLI::App* e = app.add_subcommand("eval", "Metric table against ground-truth images");
    e->add_option("--gt", ev.gt_paths, "Ground-truth HR images")->required();
    e->add_option("--dict", ev.dict_paths, "Dictionaries to run inline");
    e->add_option("--compare", ev.compares,
                  "Precomputed outputs: name=file[,file...] aligned with --gt order");
    e->add_option("--csv", ev.csv_path, "Also write the table as CSV");
    e->add_flag("--crop-border", ev.crop_border_flag, "Crop scale pixels from every side first");
    ev.solver.add_to(e);

    SampleArgs sp;
    CLI::App* p = app.add_subcommand("sample-patches", "Dump sampled training pairs as CSV");
    p->add_option("corpus", sp.corpus_dir, "Directory of training images (.png/.pgm)")
        ->required();
    p->add_option("output", sp.out_path, "Output CSV path")->required();
    p->add_option("--count", sp.count, "Number of pairs to sample")->capture_default_str();
    p->add_option("--seed", sp.seed, "RNG seed")->capture_default_str();
    p->add_option("--variance-floor", sp.variance_floor,
                  "Minimum LR patch variance for training samples")
        ->capture_default_str();
    sp.geom.add_to(p);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (t->parsed()) return cmd_train(train);
        if (s->parsed()) return cmd_sr(sr);
        if (e->parsed()) return cmd_eval(ev);
        if (p->parsed()) return cmd_sample_patches(sp);
    } catch (const invalid_input_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const io_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const coverage_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const corpus_too_flat_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const singular_matrix_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "internal error: %s\n", err.what());
        return 1;
    }
    return 0;
}
