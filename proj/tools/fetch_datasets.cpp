#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <curl/curl.h>
#include <openssl/evp.h>
#include <zlib.h>

#include "cli_common.hpp"
#include "sinr/error.hpp"

namespace sinr::cli {

namespace {

struct ManifestEntry {
    std::string dest;
    std::string url;
    std::string sha256;
};

// "dest<TAB>url<TAB>sha256" rows; relative urls are joined to the mirror.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path &path, const std::string &mirror) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::vector<ManifestEntry> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        ManifestEntry e;
        if (!std::getline(fields, e.dest, '\t') || !std::getline(fields, e.url, '\t') ||
            !std::getline(fields, e.sha256, '\t') || e.sha256.size() != 64) {
            throw ParseError(path.string(), line_no, "expected 'dest<TAB>url<TAB>sha256'");
        }
        if (e.url.find("://") == std::string::npos) {
            if (mirror.empty()) throw ParseError(path.string(), line_no, "relative url needs --mirror");
            e.url = mirror + (mirror.back() == '/' ? "" : "/") + e.url;
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::size_t append_bytes(char *data, std::size_t size, std::size_t count, void *user) {
    static_cast<std::string *>(user)->append(data, size * count);
    return size * count;
}

std::string download(const std::string &url) {
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), &curl_easy_cleanup);
    if (!curl) throw Error("curl initialisation failed");
    std::string body;
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, &append_bytes);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &body);
    const CURLcode rc = curl_easy_perform(curl.get());
    if (rc != CURLE_OK) throw Error("download of " + url + " failed: " + curl_easy_strerror(rc));
    return body;
}

std::string sha256_hex(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string gunzip(const std::string &bytes) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw Error("zlib initialisation failed");
    zs.next_in = reinterpret_cast<Bytef *>(const_cast<char *>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());
    std::string out;
    std::array<char, 1 << 16> chunk{};
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef *>(chunk.data());
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw Error("corrupt gzip stream");
        }
        out.append(chunk.data(), chunk.size() - zs.avail_out);
    }
    inflateEnd(&zs);
    return out;
}

bool ends_with(const std::string &s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

void add_fetch_command(CLI::App &app, Context &ctx) {
    struct Options {
        std::string manifest;
        std::string mirror;
        bool force = false;
    };
    auto o = std::make_shared<Options>();
    auto *cmd = app.add_subcommand("fetch-datasets", "Download datasets listed in a checksummed manifest");
    cmd->add_option("--manifest", o->manifest, "dest<TAB>url<TAB>sha256 rows")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--mirror", o->mirror, "Base url for relative manifest urls");
    cmd->add_flag("--force", o->force, "Download even when the destination exists");
    cmd->callback([o, &ctx] {
        const auto entries = read_manifest(o->manifest, o->mirror);
        curl_global_init(CURL_GLOBAL_DEFAULT);
        for (const auto &e : entries) {
            const auto dest = ctx.data_dir / e.dest;
            if (std::filesystem::exists(dest) && !o->force) {
                std::cout << "present\t" << dest.string() << '\n';
                continue;
            }
            std::string bytes = download(e.url);
            const auto digest = sha256_hex(bytes);
            if (digest != e.sha256) {
                throw Error("checksum mismatch for " + e.url + ": expected " + e.sha256 + ", got " + digest);
            }
            if (ends_with(e.url, ".gz") && !ends_with(e.dest, ".gz")) bytes = gunzip(bytes);
            if (dest.has_parent_path()) std::filesystem::create_directories(dest.parent_path());
            std::ofstream out(dest, std::ios::binary);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out) throw Error("cannot write " + dest.string());
            std::cout << "fetched\t" << dest.string() << '\n';
        }
        curl_global_cleanup();
    });
}

} // namespace sinr::cli
