#include "semimt/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "semimt/errors.hpp"

namespace semimt {

namespace {

// Shortest decimal text that parses back to the identical double.
std::string double_to_text(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double text_to_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail_data("checkpoint: malformed numeric literal '" + s + "'");
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointHeader& header,
                     const ParameterStore& store) {
    nlohmann::json doc;
    doc["format_version"] = header.format_version;
    doc["model_config"] = header.model_config;
    doc["rng_state"] = header.rng_state;
    doc["train_state"] = {{"iteration", header.iteration}};
    nlohmann::json params = nlohmann::json::object();
    for (int p = 0; p < store.size(); ++p) {
        const Tensor& t = store.value(p);
        nlohmann::json values = nlohmann::json::array();
        for (size_t i = 0; i < t.numel(); ++i) values.push_back(double_to_text(t[i]));
        params[store.name(p)] = {{"shape", t.shape()}, {"values", std::move(values)}};
    }
    doc["parameters"] = std::move(params);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_data("cannot open checkpoint for writing: " + path);
    out << doc.dump() << '\n';
    if (!out) fail_data("write failed for checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot open checkpoint: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail_data("malformed checkpoint " + path + ": " + e.what());
    }
    Checkpoint ckpt;
    try {
        ckpt.header.format_version = doc.at("format_version").get<int>();
        if (ckpt.header.format_version != kCheckpointFormatVersion)
            fail_data("unsupported checkpoint format_version in " + path);
        ckpt.header.model_config = doc.at("model_config");
        ckpt.header.rng_state = doc.at("rng_state").get<std::string>();
        if (doc.contains("train_state"))
            ckpt.header.iteration = doc["train_state"].value("iteration", 0LL);
        for (const auto& [name, entry] : doc.at("parameters").items()) {
            std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
            const auto& values = entry.at("values");
            std::vector<double> data;
            data.reserve(values.size());
            for (const auto& v : values) data.push_back(text_to_double(v.get<std::string>()));
            Tensor t;
            if (shape.empty()) {
                if (data.size() != 1) fail_data("checkpoint: scalar with wrong value count");
                t = Tensor::scalar(data[0]);
            } else if (shape.size() == 1) {
                if (data.size() != static_cast<size_t>(shape[0]))
                    fail_data("checkpoint: value count mismatch for " + name);
                t = Tensor::from(std::move(data));
            } else if (shape.size() == 2) {
                t = Tensor::from(shape[0], shape[1], std::move(data));
            } else {
                fail_data("checkpoint: unsupported rank for " + name);
            }
            t.check_finite();
            ckpt.parameters.emplace_back(name, std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        fail_data("malformed checkpoint " + path + ": " + e.what());
    }
    return ckpt;
}

void fill_store(ParameterStore& store, const Checkpoint& ckpt) {
    if (static_cast<int>(ckpt.parameters.size()) != store.size())
        fail_data("checkpoint parameter count does not match model");
    for (const auto& [name, tensor] : ckpt.parameters) {
        int idx = store.find(name);
        if (!store.value(idx).same_shape(tensor))
            fail_data("checkpoint shape mismatch for parameter " + name);
        store.value(idx) = tensor;
    }
}

}  // namespace semimt
