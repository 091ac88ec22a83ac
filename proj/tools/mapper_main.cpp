#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapper/ctree.hpp"
#include "mapper/field.hpp"
#include "mapper/graph.hpp"
#include "mapper/pipeline.hpp"

using namespace mapper;

namespace {

struct InputOptions {
    std::string input;
    std::string pattern;
    int size = 128;
    std::uint32_t seed = 0;
    std::string channel = "luminance";
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.input, "input image or csv path");
    cmd->add_option("--pattern", in.pattern, "synthetic pattern name");
    cmd->add_option("--size", in.size, "pattern size in pixels");
    cmd->add_option("--seed", in.seed, "pattern seed");
    cmd->add_option("--channel", in.channel, "luminance|red|green|blue|raw")
        ->check(CLI::IsMember({"luminance", "red", "green", "blue", "raw"}));
}

Channel parse_channel(const std::string& name) {
    if (name == "red") return Channel::red;
    if (name == "green") return Channel::green;
    if (name == "blue") return Channel::blue;
    if (name == "raw") return Channel::raw;
    return Channel::luminance;
}

ScalarField load_input(const InputOptions& in) {
    if (!in.input.empty()) return load_field(in.input, parse_channel(in.channel));
    if (!in.pattern.empty()) return generate_pattern(pattern_from_name(in.pattern), in.size, in.seed);
    throw ParameterError("either --input or --pattern is required");
}

Connectivity parse_conn(const std::string& name) {
    if (name == "eight") return Connectivity::eight;
    if (name == "four") return Connectivity::four;
    throw ParameterError("connectivity must be four or eight");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write file: " + path);
    out << text;
}

void report_graph(const MapperGraph& g) {
    std::printf("nodes=%zu edges=%zu cycle_rank=%d\n", g.nodes.size(), g.edges.size(),
                cycle_rank(g));
}

void write_outputs(const MapperGraph& g, const std::string& json_path,
                   const std::string& dot_path) {
    if (!json_path.empty()) write_text(json_path, to_json(g));
    if (!dot_path.empty()) write_text(dot_path, to_dot(g));
}

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

template <typename F>
double time_ms(F&& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

// Thresholds between consecutive distinct sweep criticals; a nested cover
// built on them reproduces the sweep tree exactly.
std::vector<double> realization_thresholds(const MergeTree& sweep) {
    std::vector<double> vals;
    for (const MergeNode& m : sweep.nodes) vals.push_back(m.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<double> mids;
    for (std::size_t i = 1; i < vals.size(); ++i) mids.push_back(0.5 * (vals[i - 1] + vals[i]));
    return mids;
}

int cmd_compute(const InputOptions& in, int slices, double overlap, const std::string& conn_name,
                bool do_simplify, const std::string& mode, const std::string& out_json,
                const std::string& out_dot, const std::string& out_cover) {
    ScalarField field = load_input(in);
    Connectivity conn = parse_conn(conn_name);
    auto range = value_range(field);
    Cover cover;
    if (mode == "uniform")
        cover = uniform_cover(range, slices, overlap);
    else if (mode == "contour")
        cover = contour_cover(critical_values(field, conn).values,
                              0.05 * std::max(1e-12, range.second - range.first));
    else if (mode == "join")
        cover = join_cover(range, slices);
    else if (mode == "split")
        cover = split_cover(range, slices);
    else
        throw ParameterError("mode must be uniform|contour|join|split");
    MapperGraph g = build_mapper(field, cover, conn);
    if (do_simplify) g = simplify(g);
    if (!out_cover.empty()) write_text(out_cover, cover_to_json(cover));
    write_outputs(g, out_json, out_dot);
    report_graph(g);
    return 0;
}

int cmd_multires(const InputOptions& in, std::vector<int> slices, double overlap,
                 const std::string& conn_name, bool do_simplify, const std::string& out_prefix) {
    if (slices.empty()) throw ParameterError("--slices must not be empty");
    ScalarField field = load_input(in);
    Connectivity conn = parse_conn(conn_name);
    auto range = value_range(field);
    // The overlap fraction applies to the finest cover; coarser covers share
    // its absolute margin so every fine interval nests inside a coarse one
    // with no uncovered sliver, which is what the embedding check needs.
    int n_max = *std::max_element(slices.begin(), slices.end());
    bool all_pass = true;
    std::optional<Cover> prev_cover;
    std::optional<MapperGraph> prev_graph;
    for (int n : slices) {
        Cover cover = uniform_cover(range, n, overlap * n / n_max);
        MapperGraph g = build_mapper(field, cover, conn);
        std::printf("slices=%d nodes=%zu edges=%zu cycle_rank=%d\n", n, g.nodes.size(),
                    g.edges.size(), cycle_rank(g));
        if (!out_prefix.empty()) {
            MapperGraph out = do_simplify ? simplify(g) : g;
            write_text(out_prefix + "_" + std::to_string(n) + ".json", to_json(out));
        }
        if (prev_cover) {
            if (refines(cover, *prev_cover)) {
                auto mapping = check_embedding(*prev_graph, g, *prev_cover, cover, field, conn);
                bool ok = mapping.has_value();
                all_pass = all_pass && ok;
                std::printf("embedding %d -> %d: %s\n", slices[&n - slices.data() - 1], n,
                            ok ? "PASS" : "FAIL");
            } else {
                std::fprintf(stderr, "warning: cover %d does not refine %d, embedding check skipped\n",
                             n, slices[&n - slices.data() - 1]);
            }
        }
        prev_cover = std::move(cover);
        prev_graph = std::move(g);
    }
    return all_pass ? 0 : 1;
}

int cmd_tree(const InputOptions& in, const std::string& mode, const std::string& conn_name,
             const std::string& out_json) {
    ScalarField field = load_input(in);
    Connectivity conn = parse_conn(conn_name);
    auto range = value_range(field);

    MapperGraph mapper_side, reference;
    if (mode == "contour") {
        CriticalValues cv = critical_values(field, conn);
        if (cv.values.size() < 2) {
            // Constant field: a single node on both sides.
            std::printf("ISOMORPHIC (constant field)\n");
            return 0;
        }
        Cover cover = contour_cover(cv.values, 0.05 * (range.second - range.first));
        mapper_side = simplify(build_mapper(field, cover, conn));
        reference = contour_tree(field, conn);
    } else if (mode == "join" || mode == "split") {
        MergeTree sweep = mode == "join" ? join_tree_sweep(field, conn)
                                         : split_tree_sweep(field, conn);
        std::vector<double> mids = realization_thresholds(sweep);
        Cover cover;
        if (mode == "join") {
            cover = join_cover_at(range, mids);
        } else {
            std::reverse(mids.begin(), mids.end());
            cover = split_cover_at(range, mids);
        }
        mapper_side = simplify(build_mapper(field, cover, conn));
        reference = simplify(merge_tree_to_graph(sweep));
    } else {
        throw ParameterError("mode must be contour|join|split");
    }

    if (!out_json.empty()) write_text(out_json, to_json(mapper_side));
    if (!is_tree(mapper_side) || !is_tree(reference)) {
        std::printf("NOT-A-TREE (mapper cycle_rank=%d, reference cycle_rank=%d)\n",
                    cycle_rank(mapper_side), cycle_rank(reference));
        std::fprintf(stderr,
                     "warning: graph is not a tree; expected for discontinuous height functions\n");
        return 0;
    }
    bool iso = tree_isomorphic(mapper_side, reference);
    std::printf("%s (mapper: %zu nodes, reference: %zu nodes)\n",
                iso ? "ISOMORPHIC" : "NOT-ISOMORPHIC", mapper_side.nodes.size(),
                reference.nodes.size());
    return iso ? 0 : 1;
}

int cmd_bench(std::vector<int> sizes, int max_size, int reps, const std::string& out_csv,
              std::vector<std::string> patterns, const std::string& conn_name) {
    Connectivity conn = parse_conn(conn_name);
    std::string csv = "pattern,size,slices,mapper_ms,ctree_ms\n";
    const int slice_counts[3] = {16, 32, 64};
    for (const std::string& pname : patterns) {
        PatternKind kind = pattern_from_name(pname);
        for (int size : sizes) {
            if (size > max_size) continue;
            ScalarField field = generate_pattern(kind, size, 1);
            auto range = value_range(field);
            for (int slices : slice_counts) {
                Cover cover = uniform_cover(range, slices, 0.25);
                build_mapper(field, cover, conn); // warmup, discarded
                std::vector<double> times;
                for (int r = 0; r < reps; ++r)
                    times.push_back(time_ms([&] { build_mapper(field, cover, conn); }));
                char row[160];
                std::snprintf(row, sizeof row, "%s,%d,%d,%.3f,\n", pname.c_str(), size, slices,
                              median_of(times));
                csv += row;
                std::fputs(row, stdout);
            }
            contour_tree(field, conn); // warmup
            std::vector<double> times;
            for (int r = 0; r < reps; ++r)
                times.push_back(time_ms([&] { contour_tree(field, conn); }));
            char row[160];
            std::snprintf(row, sizeof row, "%s,%d,0,,%.3f\n", pname.c_str(), size,
                          median_of(times));
            csv += row;
            std::fputs(row, stdout);
        }
    }
    if (!out_csv.empty()) write_text(out_csv, csv);
    return 0;
}

int cmd_generate(const std::string& pattern, int size, std::uint32_t seed,
                 const std::string& out_prefix) {
    ScalarField field = generate_pattern(pattern_from_name(pattern), size, seed);
    save_pgm(field, out_prefix + ".pgm");
    save_csv(field, out_prefix + ".csv");
    std::printf("wrote %s.pgm and %s.csv\n", out_prefix.c_str(), out_prefix.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mapper graphs of scalar fields on 2d image domains"};
    app.require_subcommand(1);

    // compute
    auto* compute = app.add_subcommand("compute", "build one Mapper graph");
    InputOptions comp_in;
    add_input_options(compute, comp_in);
    int comp_slices = 32;
    double comp_overlap = 0.25;
    std::string comp_conn = "four", comp_mode = "uniform";
    bool comp_simplify = false;
    std::string comp_json, comp_dot, comp_cover;
    compute->add_option("--slices", comp_slices, "number of cover intervals / levels");
    compute->add_option("--overlap", comp_overlap, "overlap fraction g in (0, 0.5)");
    compute->add_option("--conn", comp_conn, "four|eight");
    compute->add_option("--mode", comp_mode, "uniform|contour|join|split");
    compute->add_flag("--simplify", comp_simplify, "contract valence-2 nodes");
    compute->add_option("--out-json", comp_json, "write graph json");
    compute->add_option("--out-dot", comp_dot, "write graphviz dot");
    compute->add_option("--out-cover", comp_cover, "write cover json");

    // multires
    auto* multires = app.add_subcommand("multires", "multi-resolution hierarchy with embedding checks");
    InputOptions multi_in;
    add_input_options(multires, multi_in);
    std::vector<int> multi_slices;
    double multi_overlap = 0.25;
    std::string multi_conn = "four", multi_prefix;
    bool multi_simplify = false;
    multires->add_option("--slices", multi_slices, "slice counts, e.g. 2,4,8,16")
        ->delimiter(',')
        ->required();
    multires->add_option("--overlap", multi_overlap, "overlap fraction g");
    multires->add_option("--conn", multi_conn, "four|eight");
    multires->add_flag("--simplify", multi_simplify, "simplify written graphs");
    multires->add_option("--out-prefix", multi_prefix, "write one json per slice count");

    // tree
    auto* tree = app.add_subcommand("tree", "realize contour/join/split trees and verify");
    InputOptions tree_in;
    add_input_options(tree, tree_in);
    std::string tree_mode = "contour", tree_conn = "four", tree_json;
    tree->add_option("--mode", tree_mode, "contour|join|split");
    tree->add_option("--conn", tree_conn, "four|eight");
    tree->add_option("--out-json", tree_json, "write the simplified mapper graph");

    // bench
    auto* bench = app.add_subcommand("bench", "scaling benchmark, mapper vs contour tree");
    std::vector<int> bench_sizes{256, 512, 1024, 2048};
    int bench_max = 2048, bench_reps = 3;
    std::string bench_csv, bench_conn = "four";
    std::vector<std::string> bench_patterns{"bench1", "bench2", "bench3", "bench4"};
    bench->add_option("--sizes", bench_sizes, "image sizes")->delimiter(',');
    bench->add_option("--max-size", bench_max, "largest size to run");
    bench->add_option("--reps", bench_reps, "timed repetitions (median reported)")
        ->check(CLI::Range(3, 99));
    bench->add_option("--out-csv", bench_csv, "write timing csv");
    bench->add_option("--patterns", bench_patterns, "patterns to run")->delimiter(',');
    bench->add_option("--conn", bench_conn, "four|eight");

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic pattern to pgm and csv");
    std::string gen_pattern;
    int gen_size = 128;
    std::uint32_t gen_seed = 0;
    std::string gen_out = "pattern";
    gen->add_option("--pattern", gen_pattern, "pattern name")->required();
    gen->add_option("--size", gen_size, "size in pixels");
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--out", gen_out, "output path prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed())
            return cmd_compute(comp_in, comp_slices, comp_overlap, comp_conn, comp_simplify,
                               comp_mode, comp_json, comp_dot, comp_cover);
        if (multires->parsed())
            return cmd_multires(multi_in, multi_slices, multi_overlap, multi_conn, multi_simplify,
                                multi_prefix);
        if (tree->parsed()) return cmd_tree(tree_in, tree_mode, tree_conn, tree_json);
        if (bench->parsed())
            return cmd_bench(bench_sizes, bench_max, bench_reps, bench_csv, bench_patterns,
                             bench_conn);
        if (gen->parsed()) return cmd_generate(gen_pattern, gen_size, gen_seed, gen_out);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
