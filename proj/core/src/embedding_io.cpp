#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "file_util.hpp"
#include "sinr/embedding.hpp"
#include "sinr/error.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

constexpr char kEmbeddingMagic[9] = "SINREMBD";
constexpr std::uint32_t kEmbeddingVersion = 1;

} // namespace

void write_embedding_text(const SparseEmbedding &e, std::ostream &out) {
    out << e.rows() << ' ' << e.cols() << '\n';
    for (NodeId u = 0; u < e.rows(); ++u) {
        out << e.labels().label(u);
        for (const auto &entry : e.row(u)) out << ' ' << entry.dim << ':' << detail::format_double(entry.value);
        out << '\n';
    }
}

SparseEmbedding read_embedding_text(std::istream &in, std::string_view source) {
    const std::string src(source);
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0, k = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        const auto fields = detail::split_fields(text);
        if (fields.size() != 2 || !detail::parse_int(fields[0], n) || !detail::parse_int(fields[1], k)) {
            throw ParseError(src, line_no, "expected header 'rows cols'");
        }
        break;
    }
    if (line_no == 0) throw ParseError(src, 1, "empty embedding file");

    std::vector<SparseRow> rows;
    rows.reserve(n);
    NodeLabelMap labels;
    while (rows.size() < n && std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        const auto fields = detail::split_fields(text);
        if (labels.intern(fields[0]) != rows.size()) {
            throw ParseError(src, line_no, "duplicate label '" + std::string(fields[0]) + "'");
        }
        SparseRow row;
        row.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto colon = fields[i].find(':');
            SparseEntry entry{};
            if (colon == std::string_view::npos || !detail::parse_int(fields[i].substr(0, colon), entry.dim) ||
                !detail::parse_double(fields[i].substr(colon + 1), entry.value)) {
                throw ParseError(src, line_no, "malformed entry '" + std::string(fields[i]) + "'");
            }
            row.push_back(entry);
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() != n) {
        throw ParseError(src, line_no, "header announces " + std::to_string(n) + " rows, found " +
                                           std::to_string(rows.size()));
    }
    try {
        return SparseEmbedding(k, std::move(rows), std::move(labels));
    } catch (const ValidationError &e) {
        throw ValidationError(src + ": " + e.what());
    }
}

void write_embedding_binary(const SparseEmbedding &e, std::ostream &out) {
    out.write(kEmbeddingMagic, 8);
    detail::write_le<std::uint32_t>(out, kEmbeddingVersion);
    detail::write_le<std::uint64_t>(out, e.rows());
    detail::write_le<std::uint64_t>(out, e.cols());
    std::uint64_t offset = 0;
    detail::write_le<std::uint64_t>(out, offset);
    for (NodeId u = 0; u < e.rows(); ++u) {
        offset += e.row(u).size();
        detail::write_le<std::uint64_t>(out, offset);
    }
    for (NodeId u = 0; u < e.rows(); ++u) {
        for (const auto &entry : e.row(u)) {
            detail::write_le<std::uint32_t>(out, entry.dim);
            detail::write_le<double>(out, entry.value);
        }
    }
    for (const auto &label : e.labels().labels()) detail::write_string(out, label);
}

SparseEmbedding read_embedding_binary(std::istream &in) {
    detail::expect_magic(in, kEmbeddingMagic);
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != kEmbeddingVersion) throw Error("unsupported embedding cache version " + std::to_string(version));
    const auto n = detail::read_le<std::uint64_t>(in);
    const auto k = detail::read_le<std::uint64_t>(in);
    std::vector<std::uint64_t> offsets(n + 1);
    for (auto &o : offsets) o = detail::read_le<std::uint64_t>(in);
    if (offsets.front() != 0) throw Error("corrupt embedding cache offsets");
    std::vector<SparseRow> rows(n);
    for (std::size_t u = 0; u < n; ++u) {
        if (offsets[u + 1] < offsets[u]) throw Error("corrupt embedding cache offsets");
        rows[u].resize(offsets[u + 1] - offsets[u]);
        for (auto &entry : rows[u]) {
            entry.dim = detail::read_le<std::uint32_t>(in);
            entry.value = detail::read_le<double>(in);
        }
    }
    NodeLabelMap labels;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (labels.intern(detail::read_string(in)) != i) throw Error("duplicate label in embedding cache");
    }
    return SparseEmbedding(k, std::move(rows), std::move(labels));
}

void save_embedding(const SparseEmbedding &e, const std::filesystem::path &path, EmbeddingFormat format) {
    if (format == EmbeddingFormat::binary) {
        auto out = detail::open_output(path, std::ios::binary);
        write_embedding_binary(e, out);
    } else {
        auto out = detail::open_output(path);
        write_embedding_text(e, out);
    }
}

SparseEmbedding load_embedding(const std::filesystem::path &path) {
    if (detail::has_magic(path, kEmbeddingMagic)) {
        auto in = detail::open_input(path, std::ios::binary);
        return read_embedding_binary(in);
    }
    auto in = detail::open_input(path);
    return read_embedding_text(in, path.string());
}

} // namespace sinr
