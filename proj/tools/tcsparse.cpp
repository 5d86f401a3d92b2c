// Command-line front end: convert matrices to the block container, run the
// emulated SpMM/SDDMM kernels with verification, and emit structural
// cost reports.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tcsparse/cli.hpp"

using namespace tcsparse;

int main(int argc, char** argv) {
    CLI::App app{"sparse-on-tensor-core emulation and analysis"};
    app.require_subcommand(1);

    std::string precision_str = "fp16";
    std::string mapping_str = "coalesced";
    std::string format_str = "csv";

    auto add_precision = [&](CLI::App* cmd) {
        cmd->add_option("--precision", precision_str, "fp16 or tf32")
            ->check(CLI::IsMember({"fp16", "tf32"}));
    };
    auto add_mapping = [&](CLI::App* cmd) {
        cmd->add_option("--mapping", mapping_str, "dense-operand thread mapping")
            ->check(CLI::IsMember({"direct", "coalesced"}));
    };

    cli::ConvertOptions convert_opt;
    auto* convert = app.add_subcommand("convert", "MatrixMarket -> binary block container");
    convert->add_option("--input", convert_opt.input, "MatrixMarket file")->required();
    convert->add_option("--output", convert_opt.output, "container path");
    add_precision(convert);

    cli::SpmmOptions spmm_opt;
    auto* spmm = app.add_subcommand("spmm", "run the emulated SpMM kernel");
    spmm->add_option("--input", spmm_opt.input, "MatrixMarket file")->required();
    spmm->add_option("--n", spmm_opt.n, "dense columns");
    spmm->add_option("--vector", spmm_opt.vector_height, "vector height (8 or 16)")
        ->check(CLI::IsMember({8, 16}));
    spmm->add_option("--seed", spmm_opt.seed, "dense operand seed");
    spmm->add_flag("--verify", spmm_opt.verify, "compare against the reference product");
    spmm->add_flag("--real", spmm_opt.real_values, "uniform-real values, tolerance check");
    add_precision(spmm);
    add_mapping(spmm);

    cli::SddmmOptions sddmm_opt;
    auto* sddmm = app.add_subcommand("sddmm", "run the emulated SDDMM kernel");
    sddmm->add_option("--input", sddmm_opt.input, "mask pattern (MatrixMarket)")->required();
    sddmm->add_option("--n", sddmm_opt.n, "inner (feature) dimension");
    sddmm->add_option("--seed", sddmm_opt.seed, "dense operand seed");
    sddmm->add_option("--output", sddmm_opt.output, "container path for the sampled result");
    sddmm->add_flag("--verify", sddmm_opt.verify, "compare against per-position dot products");
    sddmm->add_flag("--real", sddmm_opt.real_values, "uniform-real values, tolerance check");
    add_precision(sddmm);

    cli::StatsOptions stats_opt;
    auto* stats = app.add_subcommand("stats", "structural cost report over a matrix set");
    stats->add_option("--input", stats_opt.input, "single MatrixMarket file");
    stats->add_option("--dir", stats_opt.dir, "directory of .mtx files");
    stats->add_option("--n", stats_opt.n_list, "dense column counts (repeatable)");
    stats->add_option("--output", stats_opt.output, "write report here instead of stdout");
    add_mapping(stats);
    stats->add_option("--format", format_str, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    cli::BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "execute kernels, cross-check counters and outputs");
    bench->add_option("--input", bench_opt.input, "single MatrixMarket file");
    bench->add_option("--dir", bench_opt.dir, "directory of .mtx files");
    bench->add_option("--n", bench_opt.n, "dense columns");
    bench->add_option("--seed", bench_opt.seed, "dense operand seed");
    bench->add_option("--output", bench_opt.output, "write report here instead of stdout");
    add_mapping(bench);

    CLI11_PARSE(app, argc, argv);

    const Precision precision = precision_from_string(precision_str);
    const ThreadMapping mapping =
        mapping_str == "direct" ? ThreadMapping::direct : ThreadMapping::coalesced;
    const ReportFormat format = format_str == "json" ? ReportFormat::json : ReportFormat::csv;

    if (convert->parsed()) {
        convert_opt.precision = precision;
        return cli::run_convert(convert_opt, std::cout, std::cerr);
    }
    if (spmm->parsed()) {
        spmm_opt.precision = precision;
        spmm_opt.mapping = mapping;
        return cli::run_spmm(spmm_opt, std::cout, std::cerr);
    }
    if (sddmm->parsed()) {
        sddmm_opt.precision = precision;
        return cli::run_sddmm(sddmm_opt, std::cout, std::cerr);
    }
    if (stats->parsed()) {
        if (stats_opt.input.empty() && stats_opt.dir.empty()) {
            std::cerr << "error: stats needs --input or --dir\n";
            return cli::kExitInputError;
        }
        stats_opt.mapping = mapping;
        stats_opt.format = format;
        return cli::run_stats(stats_opt, std::cout, std::cerr);
    }
    if (bench->parsed()) {
        if (bench_opt.input.empty() && bench_opt.dir.empty()) {
            std::cerr << "error: bench needs --input or --dir\n";
            return cli::kExitInputError;
        }
        bench_opt.mapping = mapping;
        return cli::run_bench(bench_opt, std::cout, std::cerr);
    }
    return cli::kExitOk;
}
