#include "dimred/idx.hpp"

#include "dimred/errors.hpp"
#include "dimred/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

namespace dimred::idx {
namespace {

std::uint32_t read_be32(std::istream& in, long long offset, const std::string& what) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw FormatError("truncated IDX header (" + what + ")", offset + in.gcount());
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

IdxArray read(const std::filesystem::path& path, std::uint32_t expected_magic) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    IdxArray a;
    a.magic = read_be32(in, 0, "magic");
    if (a.magic != expected_magic) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "bad IDX magic 0x%08x, expected 0x%08x", a.magic, expected_magic);
        throw FormatError(std::string(buf) + " in " + path.string(), 0);
    }
    if ((a.magic >> 8) != 0x08) throw FormatError("unsupported IDX element type", 2);
    const unsigned ndims = a.magic & 0xFFu;
    std::size_t total = 1;
    for (unsigned d = 0; d < ndims; ++d) {
        a.dims.push_back(read_be32(in, 4 + 4ll * d, "dimension " + std::to_string(d)));
        total *= a.dims.back();
    }
    const long long header = 4 + 4ll * ndims;
    a.data.resize(total);
    in.read(reinterpret_cast<char*>(a.data.data()), static_cast<std::streamsize>(total));
    if (static_cast<std::size_t>(in.gcount()) != total)
        throw FormatError("truncated IDX payload in " + path.string(), header + in.gcount());
    return a;
}

void write(const std::filesystem::path& path, const IdxArray& a) {
    std::size_t total = 1;
    for (auto d : a.dims) total *= d;
    if (total != a.data.size()) throw DimensionError("IDX payload size disagrees with dims");
    if ((a.magic & 0xFFu) != a.dims.size()) throw DimensionError("IDX magic disagrees with dim count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_be32(out, a.magic);
    for (auto d : a.dims) write_be32(out, d);
    out.write(reinterpret_cast<const char*>(a.data.data()), static_cast<std::streamsize>(a.data.size()));
    if (!out) throw Error("write failed for " + path.string());
}

Dataset to_dataset(const IdxArray& images, const IdxArray& labels) {
    if (images.dims.empty() || labels.dims.size() != 1 || images.dims[0] != labels.dims[0])
        throw DimensionError("image and label counts differ");
    const Index n = images.dims[0];
    Index p = 1;
    for (std::size_t d = 1; d < images.dims.size(); ++d) p *= images.dims[d];
    Dataset ds;
    ds.x.resize(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) ds.x(i, j) = images.data[static_cast<std::size_t>(i * p + j)] / 255.0;
    std::vector<int> y(labels.data.begin(), labels.data.end());
    ds.y = Response::categorical(y);
    return ds;
}

FashionMnist load_fashion_mnist(const std::filesystem::path& dir) {
    FashionMnist f;
    f.train = to_dataset(read(dir / "train-images-idx3-ubyte", kImageMagic),
                         read(dir / "train-labels-idx1-ubyte", kLabelMagic));
    f.test = to_dataset(read(dir / "t10k-images-idx3-ubyte", kImageMagic),
                        read(dir / "t10k-labels-idx1-ubyte", kLabelMagic));
    return f;
}

std::vector<Index> stratified_sample(const std::vector<int>& labels, Index count, std::uint64_t seed) {
    const auto n = static_cast<Index>(labels.size());
    if (count < 1 || count > n) throw ParameterError("stratified sample size must lie in [1, n]");
    std::map<int, std::vector<Index>> by_class;
    for (Index i = 0; i < n; ++i) by_class[labels[static_cast<std::size_t>(i)]].push_back(i);

    struct Quota {
        int label;
        Index take;
        double remainder;
    };
    std::vector<Quota> quotas;
    Index assigned = 0;
    for (const auto& [label, rows] : by_class) {
        const double exact = static_cast<double>(count) * static_cast<double>(rows.size()) / static_cast<double>(n);
        const auto take = static_cast<Index>(exact);
        quotas.push_back({label, take, exact - static_cast<double>(take)});
        assigned += take;
    }
    std::vector<std::size_t> order(quotas.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
    for (std::size_t t = 0; assigned < count; t = (t + 1) % order.size()) {
        auto& q = quotas[order[t]];
        if (q.take < static_cast<Index>(by_class[q.label].size())) {
            ++q.take;
            ++assigned;
        }
    }

    std::vector<Index> out;
    for (const auto& q : quotas) {
        std::vector<Index> rows = by_class[q.label];
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(q.label)}));
        std::shuffle(rows.begin(), rows.end(), rng);
        out.insert(out.end(), rows.begin(), rows.begin() + q.take);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dimred::idx
