#pragma once

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eyecontact/errors.hpp"
#include "eyecontact/evaluation.hpp"
#include "eyecontact/io.hpp"
#include "eyecontact/synthgen.hpp"

namespace eyecontact {

namespace cli_detail {

inline LabelSource parse_labels_flag(const std::string& s) {
    if (s == "cluster") return LabelSource::Clustered;
    if (s == "gt") return LabelSource::GroundTruth;
    throw InvalidConfigError("--labels must be 'cluster' or 'gt'");
}

}  // namespace cli_detail

// Entry point behind the eyecontact binary. Exit codes: 0 success,
// 1 usage error, 2 data/processing error.
inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Geometric eye contact detection: synthetic data generation and evaluation"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset");
    std::string gen_config, gen_out;
    std::uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    generate->add_option("--config", gen_config, "Generator config JSON file")->required();
    generate->add_option("--out", gen_out, "Output dataset path")->required();
    generate->add_option("--seed", gen_seed, "Override the config seed")
        ->each([&](const std::string&) { gen_seed_set = true; });

    // run-within
    auto* within = app.add_subcommand("run-within", "Leave-one-person-out evaluation");
    std::string w_dataset, w_labels = "cluster", w_by = "none", w_out;
    std::uint64_t w_seed = 0;
    within->add_option("--dataset", w_dataset, "Dataset file")->required();
    within->add_option("--labels", w_labels, "Training label source")
        ->check(CLI::IsMember({"cluster", "gt"}));
    within->add_option("--by", w_by, "Breakdown")
        ->check(CLI::IsMember({"none", "category", "headpose"}));
    within->add_option("--out", w_out, "Output report directory")->required();
    within->add_option("--seed", w_seed, "Experiment seed");

    // run-cross
    auto* cross = app.add_subcommand("run-cross", "Cross-dataset evaluation");
    std::string c_train, c_test, c_labels = "cluster", c_by = "none", c_out;
    cross->add_option("--train", c_train, "Training dataset file")->required();
    cross->add_option("--test", c_test, "Test dataset file")->required();
    cross->add_option("--labels", c_labels, "Training label source")
        ->check(CLI::IsMember({"cluster", "gt"}));
    cross->add_option("--by", c_by, "Breakdown")
        ->check(CLI::IsMember({"none", "category", "headpose"}));
    cross->add_option("--out", c_out, "Output report directory")->required();

    // report
    auto* rep = app.add_subcommand("report", "Print a stored report");
    std::string r_in, r_format = "json";
    rep->add_option("--in", r_in, "Report directory")->required();
    rep->add_option("--format", r_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    }

    try {
        if (generate->parsed()) {
            GeneratorConfig cfg = read_generator_config(gen_config);
            if (gen_seed_set) cfg.seed = gen_seed;
            const auto records = generate_dataset(cfg);
            write_dataset(records, gen_out);
            std::cout << "wrote " << records.size() << " records to " << gen_out << "\n";
        } else if (within->parsed()) {
            const auto records = read_dataset(w_dataset);
            ExperimentConfig cfg;
            cfg.label_source = cli_detail::parse_labels_flag(w_labels);
            cfg.breakdown = breakdown_from_string(w_by);
            cfg.seed = w_seed;
            const ExperimentReport report = run_within_experiment(records, cfg);
            write_report(report, w_out);
            std::cout << "mean MCC " << io_detail::format_real(report.mean_mcc) << " (SD "
                      << io_detail::format_real(report.sd_mcc) << ") over " << report.cells.size()
                      << " cell(s); report in " << w_out << "\n";
        } else if (cross->parsed()) {
            const auto train_records = read_dataset(c_train);
            const auto test_records = read_dataset(c_test);
            ExperimentConfig cfg;
            cfg.label_source = cli_detail::parse_labels_flag(c_labels);
            cfg.breakdown = breakdown_from_string(c_by);
            const ExperimentReport report = run_cross_experiment(train_records, test_records, cfg);
            write_report(report, c_out);
            std::cout << "overall MCC " << io_detail::format_real(report.overall_mcc)
                      << "; report in " << c_out << "\n";
        } else if (rep->parsed()) {
            const std::string path = (std::filesystem::path(r_in) / "report.json").string();
            std::ifstream in(path, std::ios::binary);
            if (!in) throw FileError("cannot open report: " + path);
            std::ostringstream ss;
            ss << in.rdbuf();
            const ExperimentReport report = report_from_json(ss.str());
            std::cout << (r_format == "csv" ? report_to_csv(report) : report_to_json(report));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace eyecontact
