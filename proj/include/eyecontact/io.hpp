#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eyecontact/errors.hpp"
#include "eyecontact/evaluation.hpp"
#include "eyecontact/frame.hpp"
#include "eyecontact/svm.hpp"
#include "eyecontact/synthgen.hpp"

namespace eyecontact {

constexpr int kDatasetFormatVersion = 1;
constexpr const char* kDatasetFormatName = "eyecontact-dataset";

namespace io_detail {

// Canonical real formatting: fixed significant digits, "-0" folded into
// "0". Values with that many digits round-trip bytewise through double.
inline std::string format_real(double v, int digits = 9) {
    if (!std::isfinite(v)) throw DataError("cannot serialize a non-finite number");
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

inline std::string quoted(const std::string& s) { return "\"" + escape(s) + "\""; }

inline std::string intrinsics_json(const CameraIntrinsics& intr, int digits = 9) {
    return "{\"fx\":" + format_real(intr.fx, digits) + ",\"fy\":" + format_real(intr.fy, digits) +
           ",\"cx\":" + format_real(intr.cx, digits) + ",\"cy\":" + format_real(intr.cy, digits) +
           "}";
}

inline std::string vec3_json(const Vec3& v, int digits = 9) {
    return "[" + format_real(v.x(), digits) + "," + format_real(v.y(), digits) + "," +
           format_real(v.z(), digits) + "]";
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"", line);
    return *it;
}

inline CameraIntrinsics parse_intrinsics(const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw ParseError("intrinsics must be an object", line);
    CameraIntrinsics intr;
    intr.fx = require(j, "fx", line).get<double>();
    intr.fy = require(j, "fy", line).get<double>();
    intr.cx = require(j, "cx", line).get<double>();
    intr.cy = require(j, "cy", line).get<double>();
    try {
        validate(intr);
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
    return intr;
}

inline GazeVector parse_gaze(const nlohmann::json& j, const char* what, std::size_t line) {
    if (!j.is_array() || j.size() != 3) {
        throw ParseError(std::string(what) + " must be a 3-element array", line);
    }
    Vec3 v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-6) {
        throw ParseError(std::string(what) + " must be a unit direction", line);
    }
    return GazeVector{v};
}

}  // namespace io_detail

// Writes the newline-delimited dataset format: a header object followed by
// one record object per line. Reals carry 9 significant digits, fields
// keep a fixed order, and absent optionals are explicit nulls, so
// re-serializing a parsed file reproduces it byte for byte. Per-record
// intrinsics equal to the header default are written as null.
inline std::string serialize_dataset(const std::vector<FrameRecord>& records) {
    using io_detail::format_real;
    using io_detail::quoted;

    if (records.empty()) throw EmptyDatasetError("refusing to serialize an empty dataset");

    std::size_t feature_dim = 0;
    for (const auto& r : records) {
        if (r.feature) {
            feature_dim = r.feature->size();
            break;
        }
    }
    const CameraIntrinsics default_intr = records.front().intrinsics;

    std::string out;
    out.reserve(records.size() * 256);
    out += "{\"format\":" + quoted(kDatasetFormatName) +
           ",\"version\":" + std::to_string(kDatasetFormatVersion) +
           ",\"feature_dim\":" + std::to_string(feature_dim) +
           ",\"intrinsics\":" + io_detail::intrinsics_json(default_intr) + "}\n";

    for (const auto& rec : records) {
        validate(rec);
        if (rec.feature && rec.feature->size() != feature_dim) {
            throw DataError("record " + rec.frame_id + ": feature dimension " +
                            std::to_string(rec.feature->size()) + " != dataset dimension " +
                            std::to_string(feature_dim));
        }
        out += "{\"person\":" + quoted(rec.person_id) + ",\"frame\":" + quoted(rec.frame_id) +
               ",\"category\":" + quoted(to_string(rec.visibility_category)) + ",\"landmarks\":[";
        for (int i = 0; i < kNumLandmarks; ++i) {
            if (i > 0) out += ",";
            const auto& p = rec.landmarks.points[static_cast<std::size_t>(i)];
            if (p) {
                out += "[" + format_real(p->x()) + "," + format_real(p->y()) + "]";
            } else {
                out += "null";
            }
        }
        out += "],\"intrinsics\":";
        out += rec.intrinsics == default_intr ? "null" : io_detail::intrinsics_json(rec.intrinsics);
        out += ",\"gaze_estimate\":";
        out += rec.gaze_estimate ? io_detail::vec3_json(rec.gaze_estimate->direction) : "null";
        out += ",\"true_gaze\":";
        out += rec.true_gaze ? io_detail::vec3_json(rec.true_gaze->direction) : "null";
        out += ",\"feature\":";
        if (rec.feature) {
            out += "[";
            for (std::size_t i = 0; i < rec.feature->size(); ++i) {
                if (i > 0) out += ",";
                out += format_real((*rec.feature)[i]);
            }
            out += "]";
        } else {
            out += "null";
        }
        out += ",\"contact\":";
        out += rec.gt_eye_contact ? (*rec.gt_eye_contact ? "true" : "false") : "null";
        out += "}\n";
    }
    return out;
}

inline void write_dataset(const std::vector<FrameRecord>& records, const std::string& path) {
    const std::string data = serialize_dataset(records);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open for writing: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw FileError("write failed: " + path);
}

inline std::vector<FrameRecord> parse_dataset(std::istream& in) {
    using nlohmann::json;

    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw EmptyDatasetError("dataset file is empty");
    ++line_no;

    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid header: ") + e.what(), line_no);
    }
    if (!header.is_object() || io_detail::require(header, "format", line_no) != kDatasetFormatName) {
        throw ParseError("not an eyecontact dataset file", line_no);
    }
    const int version = io_detail::require(header, "version", line_no).get<int>();
    if (version != kDatasetFormatVersion) {
        throw VersionMismatchError("unsupported dataset version " + std::to_string(version) +
                                   ", expected " + std::to_string(kDatasetFormatVersion));
    }
    const auto feature_dim = io_detail::require(header, "feature_dim", line_no).get<std::size_t>();
    const CameraIntrinsics default_intr =
        io_detail::parse_intrinsics(io_detail::require(header, "intrinsics", line_no), line_no);

    std::vector<FrameRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(e.what(), line_no);
        }
        try {
            FrameRecord rec;
            rec.person_id = io_detail::require(j, "person", line_no).get<std::string>();
            rec.frame_id = io_detail::require(j, "frame", line_no).get<std::string>();
            rec.visibility_category = category_from_string(
                io_detail::require(j, "category", line_no).get<std::string>());

            const auto& lm = io_detail::require(j, "landmarks", line_no);
            if (!lm.is_array() || lm.size() != kNumLandmarks) {
                throw ParseError("landmarks must be a 6-element array", line_no);
            }
            for (std::size_t i = 0; i < kNumLandmarks; ++i) {
                if (lm[i].is_null()) continue;
                if (!lm[i].is_array() || lm[i].size() != 2) {
                    throw ParseError("landmark " + std::to_string(i) + " must be [u, v] or null",
                                     line_no);
                }
                rec.landmarks.points[i] = Vec2(lm[i][0].get<double>(), lm[i][1].get<double>());
            }

            const auto& intr = io_detail::require(j, "intrinsics", line_no);
            rec.intrinsics =
                intr.is_null() ? default_intr : io_detail::parse_intrinsics(intr, line_no);

            const auto& ge = io_detail::require(j, "gaze_estimate", line_no);
            if (!ge.is_null()) rec.gaze_estimate = io_detail::parse_gaze(ge, "gaze_estimate", line_no);
            const auto& tg = io_detail::require(j, "true_gaze", line_no);
            if (!tg.is_null()) rec.true_gaze = io_detail::parse_gaze(tg, "true_gaze", line_no);

            const auto& feat = io_detail::require(j, "feature", line_no);
            if (!feat.is_null()) {
                if (!feat.is_array() || feat.size() != feature_dim) {
                    throw ParseError("feature dimension " + std::to_string(feat.size()) +
                                     " does not match header feature_dim " +
                                     std::to_string(feature_dim), line_no);
                }
                std::vector<double> f(feature_dim);
                for (std::size_t i = 0; i < feature_dim; ++i) f[i] = feat[i].get<double>();
                rec.feature = std::move(f);
            }

            const auto& contact = io_detail::require(j, "contact", line_no);
            if (!contact.is_null()) rec.gt_eye_contact = contact.get<bool>();

            validate(rec);
            records.push_back(std::move(rec));
        } catch (const ParseError&) {
            throw;
        } catch (const json::exception& e) {
            throw ParseError(e.what(), line_no);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (records.empty()) throw EmptyDatasetError("dataset holds no records");
    return records;
}

inline std::vector<FrameRecord> read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open dataset: " + path);
    return parse_dataset(in);
}

// --- model serialization ---

constexpr int kModelFormatVersion = 1;

inline std::string model_to_json(const EyeContactModel& model) {
    using io_detail::format_real;
    std::string out = "{\"version\":" + std::to_string(kModelFormatVersion) +
                      ",\"feature_dim\":" + std::to_string(model.feature_dim) + ",\"weights\":[";
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (i > 0) out += ",";
        out += format_real(model.weights[i], 17);
    }
    out += "],\"bias\":" + format_real(model.bias, 17);
    out += ",\"label_source\":" + io_detail::quoted(to_string(model.label_source));
    out += ",\"hyperparams\":{\"lambda\":" + format_real(model.hyperparams.lambda, 17) +
           ",\"epochs\":" + std::to_string(model.hyperparams.epochs) +
           ",\"balance_classes\":" + (model.hyperparams.balance_classes ? "true" : "false") +
           ",\"project\":" + std::string(model.hyperparams.project ? "true" : "false") + "}";
    out += ",\"seed\":" + std::to_string(model.hyperparams.seed);
    out += ",\"n_positive\":" + std::to_string(model.n_positive);
    out += ",\"n_negative\":" + std::to_string(model.n_negative) + "}\n";
    return out;
}

inline EyeContactModel model_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 1);
    }
    try {
        if (j.at("version").get<int>() != kModelFormatVersion) {
            throw VersionMismatchError("unsupported model version");
        }
        EyeContactModel m;
        m.feature_dim = j.at("feature_dim").get<std::size_t>();
        m.weights = j.at("weights").get<std::vector<double>>();
        m.bias = j.at("bias").get<double>();
        m.label_source = label_source_from_string(j.at("label_source").get<std::string>());
        m.hyperparams.lambda = j.at("hyperparams").at("lambda").get<double>();
        m.hyperparams.epochs = j.at("hyperparams").at("epochs").get<int>();
        m.hyperparams.balance_classes = j.at("hyperparams").at("balance_classes").get<bool>();
        m.hyperparams.project = j.at("hyperparams").at("project").get<bool>();
        m.hyperparams.seed = j.at("seed").get<std::uint64_t>();
        m.n_positive = j.at("n_positive").get<std::size_t>();
        m.n_negative = j.at("n_negative").get<std::size_t>();
        if (m.weights.size() != m.feature_dim) {
            throw DataError("model weights length does not match feature_dim");
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid model document: ") + e.what());
    }
}

inline void save_model(const EyeContactModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open for writing: " + path);
    out << model_to_json(model);
    if (!out) throw FileError("write failed: " + path);
}

inline EyeContactModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open model: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

// --- report serialization ---

constexpr int kReportFormatVersion = 1;

inline std::string report_to_json(const ExperimentReport& report) {
    using io_detail::format_real;
    using io_detail::quoted;

    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": " << kReportFormatVersion << ",\n";
    out << "  \"protocol\": " << quoted(report.protocol) << ",\n";
    out << "  \"label_source\": " << quoted(to_string(report.label_source)) << ",\n";
    out << "  \"breakdown\": " << quoted(to_string(report.breakdown)) << ",\n";
    out << "  \"seed\": " << report.seed << ",\n";
    out << "  \"sd_definition\": " << quoted(report.sd_definition) << ",\n";
    out << "  \"overall_mcc\": " << format_real(report.overall_mcc) << ",\n";
    out << "  \"mean_mcc\": " << format_real(report.mean_mcc) << ",\n";
    out << "  \"sd_mcc\": " << format_real(report.sd_mcc) << ",\n";

    out << "  \"exclusions\": {";
    bool first = true;
    for (const auto& [reason, count] : report.exclusion_counts) {
        out << (first ? "" : ", ") << quoted(reason) << ": " << count;
        first = false;
    }
    out << "},\n";

    out << "  \"failure_accounting\": [\n";
    for (std::size_t i = 0; i < report.accounting.size(); ++i) {
        const auto& a = report.accounting[i];
        out << "    {\"category\": " << quoted(a.category) << ", \"total\": " << a.total
            << ", \"excluded\": " << a.excluded << ", \"rate\": " << format_real(a.rate) << "}"
            << (i + 1 < report.accounting.size() ? "," : "") << "\n";
    }
    out << "  ],\n";

    out << "  \"cells\": [\n";
    for (std::size_t c = 0; c < report.cells.size(); ++c) {
        const auto& cell = report.cells[c];
        out << "    {\n";
        out << "      \"id\": " << quoted(cell.id) << ",\n";
        out << "      \"status\": " << quoted(cell.status) << ",\n";
        out << "      \"reason\": " << (cell.reason.empty() ? "null" : quoted(cell.reason)) << ",\n";
        out << "      \"n_train\": " << cell.n_train << ",\n";
        out << "      \"n_test\": " << cell.n_test << ",\n";
        out << "      \"n_excluded\": " << cell.n_excluded << ",\n";
        out << "      \"mcc\": " << format_real(cell.mcc) << ",\n";
        out << "      \"mean\": " << format_real(cell.mean_mcc) << ",\n";
        out << "      \"sd\": " << format_real(cell.sd_mcc) << ",\n";
        out << "      \"exclusions\": {";
        first = true;
        for (const auto& [reason, count] : cell.exclusions) {
            out << (first ? "" : ", ") << quoted(reason) << ": " << count;
            first = false;
        }
        out << "},\n";
        out << "      \"folds\": [";
        for (std::size_t f = 0; f < cell.folds.size(); ++f) {
            const auto& fold = cell.folds[f];
            out << (f > 0 ? "," : "") << "\n        {\"test_person\": " << quoted(fold.test_person)
                << ", \"status\": " << quoted(fold.status)
                << ", \"mcc\": " << format_real(fold.mcc) << ", \"n_train\": " << fold.n_train
                << ", \"n_test\": " << fold.n_test << ", \"tp\": " << fold.counts.tp
                << ", \"fp\": " << fold.counts.fp << ", \"tn\": " << fold.counts.tn
                << ", \"fn\": " << fold.counts.fn << "}";
        }
        out << (cell.folds.empty() ? "]" : "\n      ]") << "\n";
        out << "    }" << (c + 1 < report.cells.size() ? "," : "") << "\n";
    }
    out << "  ]\n";
    out << "}\n";
    return out.str();
}

// One row per cell: breakdown id, n_train, n_test, n_excluded, mcc, mean, sd.
inline std::string report_to_csv(const ExperimentReport& report) {
    using io_detail::format_real;
    std::string out = "breakdown,n_train,n_test,n_excluded,mcc,mean,sd\n";
    for (const auto& cell : report.cells) {
        out += cell.id + "," + std::to_string(cell.n_train) + "," + std::to_string(cell.n_test) +
               "," + std::to_string(cell.n_excluded) + "," + format_real(cell.mcc) + "," +
               format_real(cell.mean_mcc) + "," + format_real(cell.sd_mcc) + "\n";
    }
    return out;
}

inline ExperimentReport report_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 1);
    }
    try {
        if (j.at("version").get<int>() != kReportFormatVersion) {
            throw VersionMismatchError("unsupported report version");
        }
        ExperimentReport r;
        r.protocol = j.at("protocol").get<std::string>();
        r.label_source = label_source_from_string(j.at("label_source").get<std::string>());
        r.breakdown = breakdown_from_string(j.at("breakdown").get<std::string>());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.sd_definition = j.at("sd_definition").get<std::string>();
        r.overall_mcc = j.at("overall_mcc").get<double>();
        r.mean_mcc = j.at("mean_mcc").get<double>();
        r.sd_mcc = j.at("sd_mcc").get<double>();
        for (const auto& [reason, count] : j.at("exclusions").items()) {
            r.exclusion_counts[reason] = count.get<std::int64_t>();
        }
        for (const auto& a : j.at("failure_accounting")) {
            CategoryAccounting acc;
            acc.category = a.at("category").get<std::string>();
            acc.total = a.at("total").get<std::int64_t>();
            acc.excluded = a.at("excluded").get<std::int64_t>();
            acc.rate = a.at("rate").get<double>();
            r.accounting.push_back(std::move(acc));
        }
        for (const auto& cj : j.at("cells")) {
            CellReport cell;
            cell.id = cj.at("id").get<std::string>();
            cell.status = cj.at("status").get<std::string>();
            if (!cj.at("reason").is_null()) cell.reason = cj.at("reason").get<std::string>();
            cell.n_train = cj.at("n_train").get<std::int64_t>();
            cell.n_test = cj.at("n_test").get<std::int64_t>();
            cell.n_excluded = cj.at("n_excluded").get<std::int64_t>();
            cell.mcc = cj.at("mcc").get<double>();
            cell.mean_mcc = cj.at("mean").get<double>();
            cell.sd_mcc = cj.at("sd").get<double>();
            for (const auto& [reason, count] : cj.at("exclusions").items()) {
                cell.exclusions[reason] = count.get<std::int64_t>();
            }
            for (const auto& fj : cj.at("folds")) {
                FoldReport fold;
                fold.test_person = fj.at("test_person").get<std::string>();
                fold.status = fj.at("status").get<std::string>();
                fold.mcc = fj.at("mcc").get<double>();
                fold.n_train = fj.at("n_train").get<std::int64_t>();
                fold.n_test = fj.at("n_test").get<std::int64_t>();
                fold.counts.tp = fj.at("tp").get<std::int64_t>();
                fold.counts.fp = fj.at("fp").get<std::int64_t>();
                fold.counts.tn = fj.at("tn").get<std::int64_t>();
                fold.counts.fn = fj.at("fn").get<std::int64_t>();
                cell.folds.push_back(std::move(fold));
            }
            r.cells.push_back(std::move(cell));
        }
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid report document: ") + e.what());
    }
}

inline void write_report(const ExperimentReport& report, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw FileError("cannot create output directory " + dir + ": " + ec.message());
    for (const auto& [name, text] :
         {std::pair<std::string, std::string>{"report.json", report_to_json(report)},
          {"report.csv", report_to_csv(report)}}) {
        const std::string path = (std::filesystem::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw FileError("cannot open for writing: " + path);
        out << text;
        if (!out) throw FileError("write failed: " + path);
    }
}

// --- generator config ---

inline GeneratorConfig generator_config_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 1);
    }
    if (!j.is_object()) throw InvalidConfigError("generator config must be a JSON object");

    GeneratorConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n_persons") cfg.n_persons = value.get<int>();
            else if (key == "frames_per_person") cfg.frames_per_person = value.get<int>();
            else if (key == "p_contact") cfg.p_contact = value.get<double>();
            else if (key == "screen_x_min") cfg.screen_x_min = value.get<double>();
            else if (key == "screen_x_max") cfg.screen_x_max = value.get<double>();
            else if (key == "screen_y_min") cfg.screen_y_min = value.get<double>();
            else if (key == "screen_y_max") cfg.screen_y_max = value.get<double>();
            else if (key == "distance_min") cfg.distance_min = value.get<double>();
            else if (key == "distance_max") cfg.distance_max = value.get<double>();
            else if (key == "face_offset_max_deg") cfg.face_offset_max_deg = value.get<double>();
            else if (key == "pitch_mean") cfg.head_pose.pitch_mean = value.get<double>();
            else if (key == "yaw_mean") cfg.head_pose.yaw_mean = value.get<double>();
            else if (key == "pose_sigma_central") cfg.head_pose.sigma_central = value.get<double>();
            else if (key == "pose_sigma_wide") cfg.head_pose.sigma_wide = value.get<double>();
            else if (key == "pose_wide_weight") cfg.head_pose.wide_weight = value.get<double>();
            else if (key == "head_spin_sigma_deg") cfg.head_pose.spin_sigma_deg = value.get<double>();
            else if (key == "person_pose_offset_sigma") cfg.person_pose_offset_sigma = value.get<double>();
            else if (key == "pixel_noise_sigma") cfg.pixel_noise_sigma = value.get<double>();
            else if (key == "gaze_noise_sigma_deg") cfg.gaze_noise_sigma_deg = value.get<double>();
            else if (key == "gaze_noise_pose_factor") cfg.gaze_noise_pose_factor = value.get<double>();
            else if (key == "feature_dim") cfg.feature_dim = value.get<std::size_t>();
            else if (key == "feature_noise_sigma") cfg.feature_noise_sigma = value.get<double>();
            else if (key == "feature_noise_pose_factor") cfg.feature_noise_pose_factor = value.get<double>();
            else if (key == "person_bias_sigma") cfg.person_bias_sigma = value.get<double>();
            else if (key == "env_targets") cfg.env_targets = value.get<int>();
            else if (key == "env_radius_min") cfg.env_radius_min = value.get<double>();
            else if (key == "env_radius_max") cfg.env_radius_max = value.get<double>();
            else if (key == "env_scatter_sigma") cfg.env_scatter_sigma = value.get<double>();
            else if (key == "env_diffuse_fraction") cfg.env_diffuse_fraction = value.get<double>();
            else if (key == "env_behind_fraction") cfg.env_behind_fraction = value.get<double>();
            else if (key == "visibility_weights") {
                const auto w = value.get<std::vector<double>>();
                if (w.size() != kNumCategories) {
                    throw InvalidConfigError("visibility_weights must have 8 entries");
                }
                std::copy(w.begin(), w.end(), cfg.visibility_weights.begin());
            } else if (key == "fx") cfg.intrinsics.fx = value.get<double>();
            else if (key == "fy") cfg.intrinsics.fy = value.get<double>();
            else if (key == "cx") cfg.intrinsics.cx = value.get<double>();
            else if (key == "cy") cfg.intrinsics.cy = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else throw InvalidConfigError("unknown generator config key: \"" + key + "\"");
        }
    } catch (const json::exception& e) {
        throw InvalidConfigError(std::string("invalid generator config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

inline GeneratorConfig read_generator_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return generator_config_from_json(ss.str());
}

}  // namespace eyecontact
