#include "skillgraph/config.hpp"

#include <fstream>
#include <sstream>

#include "skillgraph/errors.hpp"

namespace skillgraph::service {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string current;
    for (char c : s) {
        if (c == ',') {
            if (auto t = trim(current); !t.empty()) out.push_back(t);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (auto t = trim(current); !t.empty()) out.push_back(t);
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects an integer, got '" + value + "'");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects a number, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config key '" + key + "' expects a boolean, got '" + value + "'");
}

}  // namespace

ServiceConfig ServiceConfig::from_string(const std::string& content) {
    ServiceConfig c;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "snapshot") c.snapshot_path = value;
        else if (key == "lexical_index") c.lexical_index_path = value;
        else if (key == "vector_index") c.vector_index_path = value;
        else if (key == "listen_address") c.listen_address = value;
        else if (key == "listen_port") c.listen_port = to_int(key, value);
        else if (key == "default_language") c.default_language = value;
        else if (key == "languages") c.languages = split_csv(value);
        else if (key == "fusion.variant") {
            auto v = retrieval::parse_variant(value);
            if (!v) throw ConfigError("unknown fusion.variant '" + value + "'");
            c.fusion.variant = *v;
        } else if (key == "fusion.alpha") c.fusion.alpha = to_double(key, value);
        else if (key == "fusion.k") c.fusion.k = static_cast<std::size_t>(to_int(key, value));
        else if (key == "fusion.pool_lex")
            c.fusion.pool_lex = static_cast<std::size_t>(to_int(key, value));
        else if (key == "fusion.pool_sem")
            c.fusion.pool_sem = static_cast<std::size_t>(to_int(key, value));
        else if (key == "fusion.rerank_n")
            c.fusion.rerank_n = static_cast<std::size_t>(to_int(key, value));
        else if (key == "hnsw.m") c.hnsw.m = static_cast<std::size_t>(to_int(key, value));
        else if (key == "hnsw.ef_construction")
            c.hnsw.ef_construction = static_cast<std::size_t>(to_int(key, value));
        else if (key == "hnsw.ef_search")
            c.hnsw.ef_search = static_cast<std::size_t>(to_int(key, value));
        else if (key == "hnsw.seed")
            c.hnsw.seed = static_cast<std::uint64_t>(to_int(key, value));
        else if (key == "embedder.mode") {
            if (value != "fallback" && value != "external") {
                throw ConfigError("embedder.mode must be 'fallback' or 'external'");
            }
            c.embedder_mode = value;
        } else if (key == "embedder.endpoint") c.embedder_endpoint = value;
        else if (key == "embedder.timeout_ms") c.embedder_timeout_ms = to_int(key, value);
        else if (key == "generator.endpoint") c.generator_endpoint = value;
        else if (key == "generator.deadline_ms") c.generator_deadline_ms = to_int(key, value);
        else if (key == "generator.max_tokens") c.generator_max_tokens = to_int(key, value);
        else if (key == "ranker.endpoint") c.ranker_endpoint = value;
        else if (key == "ranker.timeout_ms") c.ranker_timeout_ms = to_int(key, value);
        else if (key == "enable_freeform") c.enable_freeform = to_bool(key, value);
        else {
            throw ConfigError("unknown config key '" + key + "' at line " +
                              std::to_string(line_no));
        }
    }
    if (c.embedder_mode == "external" && c.embedder_endpoint.empty()) {
        throw ConfigError("embedder.mode=external requires embedder.endpoint");
    }
    c.fusion.validate();
    return c;
}

ServiceConfig ServiceConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

std::string ServiceConfig::to_string() const {
    std::ostringstream out;
    out << "snapshot = " << snapshot_path << "\n";
    out << "lexical_index = " << lexical_path() << "\n";
    out << "vector_index = " << vector_path() << "\n";
    out << "listen_address = " << listen_address << "\n";
    out << "listen_port = " << listen_port << "\n";
    out << "default_language = " << default_language << "\n";
    out << "languages = ";
    for (std::size_t i = 0; i < languages.size(); ++i) {
        if (i) out << ",";
        out << languages[i];
    }
    out << "\n";
    out << "fusion.variant = " << retrieval::to_string(fusion.variant) << "\n";
    out << "fusion.alpha = " << fusion.alpha << "\n";
    out << "fusion.k = " << fusion.k << "\n";
    out << "fusion.pool_lex = " << fusion.pool_lex << "\n";
    out << "fusion.pool_sem = " << fusion.pool_sem << "\n";
    out << "fusion.rerank_n = " << fusion.rerank_n << "\n";
    out << "hnsw.m = " << hnsw.m << "\n";
    out << "hnsw.ef_construction = " << hnsw.ef_construction << "\n";
    out << "hnsw.ef_search = " << hnsw.ef_search << "\n";
    out << "hnsw.seed = " << hnsw.seed << "\n";
    out << "embedder.mode = " << embedder_mode << "\n";
    out << "embedder.endpoint = " << embedder_endpoint << "\n";
    out << "embedder.timeout_ms = " << embedder_timeout_ms << "\n";
    out << "generator.endpoint = " << generator_endpoint << "\n";
    out << "generator.deadline_ms = " << generator_deadline_ms << "\n";
    out << "generator.max_tokens = " << generator_max_tokens << "\n";
    out << "ranker.endpoint = " << ranker_endpoint << "\n";
    out << "ranker.timeout_ms = " << ranker_timeout_ms << "\n";
    out << "enable_freeform = " << (enable_freeform ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace skillgraph::service
