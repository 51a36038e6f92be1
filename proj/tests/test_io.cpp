#include "dimred/csv.hpp"
#include "dimred/errors.hpp"
#include "dimred/idx.hpp"
#include "dimred/online_news.hpp"
#include "dimred/persist.hpp"
#include "dimred/svg.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

using namespace dimred;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("dimred_io_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("CSV reader handles quotes and line endings") {
    std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\r\n1,\"two\nlines\",3\n\nlast");
    csv::Reader r(in);
    csv::Row row;
    REQUIRE(r.next(row));
    CHECK(row == csv::Row{"a", "b,c", "say \"hi\""});
    CHECK(r.line() == 1);
    REQUIRE(r.next(row));
    CHECK(row == csv::Row{"1", "two\nlines", "3"});
    CHECK(r.line() == 2);
    REQUIRE(r.next(row));
    CHECK(row == csv::Row{""});
    REQUIRE(r.next(row));
    CHECK(row == csv::Row{"last"});
    CHECK(r.line() == 5);
    CHECK_FALSE(r.next(row));

    std::istringstream bad("x,\"open");
    csv::Reader rb(bad);
    CHECK_THROWS_AS(rb.next(row), FormatError);
}

TEST_CASE("CSV writing quotes what needs quoting") {
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("q\"") == "\"q\"\"\"");
    std::ostringstream out;
    csv::write_row(out, {"x", "y z", "1,2"});
    CHECK(out.str() == "x,y z,\"1,2\"\n");
    std::istringstream back(out.str());
    csv::Reader r(back);
    csv::Row row;
    REQUIRE(r.next(row));
    CHECK(row == csv::Row{"x", "y z", "1,2"});
}

TEST_CASE("doubles round-trip through text") {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double v = u(g) / (1 + i);
        CHECK(*csv::parse_double(csv::format_double(v)) == v);
    }
    CHECK(csv::format_double(NAN) == "NA");
    CHECK(std::isnan(*csv::parse_double("NA")));
    CHECK(std::isnan(*csv::parse_double("")));
    CHECK_FALSE(csv::parse_double("1.5x").has_value());
    CHECK_FALSE(csv::parse_double("abc").has_value());
    CHECK(*csv::parse_double("-2e-3") == -2e-3);
}

TEST_CASE("numeric matrices round-trip") {
    TempDir t;
    const Eigen::MatrixXd m = oracle::random_matrix(7, 3, 2);
    csv::write_matrix(t.path / "m.csv", m, csv::numbered_header("z", 3));
    csv::Row header;
    CHECK(csv::read_matrix(t.path / "m.csv", &header) == m);
    CHECK(header == csv::Row{"z1", "z2", "z3"});

    write_text(t.path / "ragged.csv", "a,b\n1,2\n3\n");
    try {
        csv::read_matrix(t.path / "ragged.csv");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 3);
    }
    write_text(t.path / "text.csv", "a,b\n1,2\n3,4\nfive,6\n");
    try {
        csv::read_matrix(t.path / "text.csv");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("IDX round trip") {
    TempDir t;
    idx::IdxArray a;
    a.magic = idx::kImageMagic;
    a.dims = {2, 3, 4};
    for (int i = 0; i < 24; ++i) a.data.push_back(static_cast<std::uint8_t>(i * 10));
    idx::write(t.path / "img", a);
    const idx::IdxArray b = idx::read(t.path / "img", idx::kImageMagic);
    CHECK(b.dims == a.dims);
    CHECK(b.data == a.data);
    CHECK(fs::file_size(t.path / "img") == 4 + 3 * 4 + 24);

    idx::IdxArray l;
    l.magic = idx::kLabelMagic;
    l.dims = {2};
    l.data = {7, 3};
    const Dataset d = idx::to_dataset(a, l);
    CHECK(d.n() == 2);
    CHECK(d.p() == 12);
    CHECK(d.x(1, 0) == doctest::Approx(120.0 / 255.0));
    CHECK(d.y.labels() == std::vector<int>{7, 3});
}

TEST_CASE("IDX errors carry byte offsets") {
    TempDir t;
    idx::IdxArray a;
    a.magic = idx::kImageMagic;
    a.dims = {2, 2, 2};
    a.data.assign(8, 1);
    idx::write(t.path / "img", a);
    try {
        idx::read(t.path / "img", idx::kLabelMagic);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 0);
    }
    fs::resize_file(t.path / "img", 16 + 5);
    try {
        idx::read(t.path / "img", idx::kImageMagic);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 21);
    }
    CHECK_THROWS(idx::read(t.path / "missing", idx::kImageMagic));
}

TEST_CASE("stratified sampling keeps class proportions") {
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c) labels.insert(labels.end(), static_cast<std::size_t>(10 * (c + 1)), c);
    const std::vector<Index> s = idx::stratified_sample(labels, 12, 5);
    CHECK(s.size() == 12);
    CHECK(std::is_sorted(s.begin(), s.end()));
    std::map<int, int> per;
    for (Index i : s) ++per[labels[static_cast<std::size_t>(i)]];
    CHECK(per[0] == 2);
    CHECK(per[1] == 4);
    CHECK(per[2] == 6);
    CHECK(s == idx::stratified_sample(labels, 12, 5));
}

TEST_CASE("online news parsing") {
    TempDir t;
    write_text(t.path / "news.csv",
               "url, timedelta, n_tokens_title, kw_avg,  shares\n"
               "http://a, 731.0, 12, 0.5, 1\n"
               "http://b, 700.0, 9, 1.5, 100\n");
    const news::OnlineNews n = news::load_online_news(t.path / "news.csv");
    CHECK(n.feature_names == std::vector<std::string>{"n_tokens_title", "kw_avg"});
    CHECK(n.data.n() == 2);
    CHECK(n.data.x(1, 1) == 1.5);
    CHECK(n.data.y.values[0] == 0.0);
    CHECK(n.data.y.values[1] == doctest::Approx(std::log(100.0)));
    CHECK(news::load_online_news(t.path / "news.csv", {true}).data.y.values[1] == doctest::Approx(2.0));

    write_text(t.path / "noshares.csv", "url, a\nx, 1\n");
    try {
        news::load_online_news(t.path / "noshares.csv");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 1);
    }
    write_text(t.path / "bad.csv", "url, a, shares\nx, 1, 2\ny, oops, 3\n");
    try {
        news::load_online_news(t.path / "bad.csv");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 3);
    }
}

TEST_CASE("SVG scatter plots") {
    TempDir t;
    svg::PlotSpec spec;
    spec.coords.resize(3, 2);
    spec.coords << 0, 0, 1, 1, 2, 0.5;
    spec.labels = {0, 1, 1};
    spec.title = "three <points>";
    spec.path = t.path / "plot.svg";
    svg::emit_plot(spec);
    std::ifstream in(spec.path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(count(text, "<circle") == 3);
    CHECK(count(text, "class=\"legend-entry\"") == 2);
    CHECK(text.find("&lt;points&gt;") != std::string::npos);

    svg::PlotSpec empty;
    empty.coords.resize(0, 2);
    empty.path = t.path / "empty.svg";
    CHECK_THROWS_AS(svg::emit_plot(empty), ParameterError);
    CHECK_FALSE(fs::exists(empty.path));

    svg::PlotSpec wide = spec;
    wide.coords = Embedding::Zero(3, 3);
    CHECK_THROWS_AS(svg::render(wide), ParameterError);
    svg::PlotSpec mismatch = spec;
    mismatch.labels = {0};
    CHECK_THROWS_AS(svg::render(mismatch), ParameterError);

    CHECK(svg::category_color(0) == svg::category_color(10));
    CHECK(svg::category_color(0) != svg::category_color(1));
    CHECK(svg::ramp_color(0.0).size() == 7);
}

TEST_CASE("model bundles round-trip") {
    TempDir t;
    const DataMatrix x = oracle::random_matrix(40, 4, 3);
    const DataMatrix fresh = oracle::random_matrix(5, 4, 4);
    Dataset d{x, Response::continuous(x.col(0) + x.col(1))};

    const PcaModel pca = pca_fit(x, 2);
    persist::save(pca, t.path / "pca");
    CHECK(persist::model_type(t.path / "pca") == "pca");
    CHECK(pca_transform(persist::load_pca(t.path / "pca"), fresh) == pca_transform(pca, fresh));

    const SirModel sir = sir_fit(d, {5, 2, 1e-3});
    persist::save(sir, t.path / "sir");
    CHECK(sir_transform(persist::load_sir(t.path / "sir"), fresh) == sir_transform(sir, fresh));

    const KernelModel km = kpca_fit(x, {KernelFamily::Gaussian, 0.3, 2, 1.0}, 2);
    persist::save(km, t.path / "kpca");
    const KernelModel kl = persist::load_kernel(t.path / "kpca");
    CHECK(kl.spec.gamma == 0.3);
    CHECK(kernel_transform(kl, fresh) == kernel_transform(km, fresh));

    tsne::TsneConfig tc;
    tc.perplexity = 5;
    tc.epochs = 100;
    const tsne::TsneModel tm = tsne::fit(x, tc);
    persist::save(tm, t.path / "tsne");
    CHECK(tsne::transform(persist::load_tsne(t.path / "tsne"), fresh) == tsne::transform(tm, fresh));

    umap::UmapParams up;
    up.n_neighbors = 8;
    up.opt.epochs = 50;
    const umap::UmapModel um = umap::fit(x, nullptr, up);
    persist::save(um, t.path / "umap");
    const umap::UmapModel ul = persist::load_umap(t.path / "umap");
    CHECK(ul.embedding == um.embedding);
    CHECK(umap::transform(ul, fresh) == umap::transform(um, fresh));

    persist::save_identity(4, t.path / "orig");
    CHECK(persist::model_type(t.path / "orig") == "identity");

    write_text(t.path / "pca" / "manifest.json", "{\"format\":\"dimred-model\",\"version\":99,\"type\":\"pca\"}");
    CHECK_THROWS_AS(persist::model_type(t.path / "pca"), FormatError);
    CHECK_THROWS_AS(persist::model_type(t.path / "nothing"), FormatError);
}
