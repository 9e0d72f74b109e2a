#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "../support/oracles.hpp"
#include "../support/test_support.hpp"
#include "snowaug/cli/commands.hpp"
#include "snowaug/cli/run_config.hpp"
#include "snowaug/core/error.hpp"

using namespace snowaug;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "snowaug");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Small working size keeps the synthesis cheap.
std::string small_config(const fs::path& dir) {
    const auto path = dir / "small.toml";
    test::write_text(path, "[snow]\nworking_width = 64\nworking_height = 36\n");
    return path.string();
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
    std::size_t n = 0;
    if (!fs::exists(dir)) return 0;
    for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
    return n;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(test::read_text(p)); }

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("sections and dotted keys") {
        const auto doc = parse_config_text(
            "# comment\nseed = 9\nworkers = 3\n[snow]\nscale_array = [1, 2, 3, 4, 5]\ncoverage_quantile = 0.1\n"
            "[io]\nformat = \"jsonl\"\nmix.p_synthetic = 0.25\n");
        CHECK(doc.count("snow.scale_array") == 1);
        CHECK(doc.count("io.mix.p_synthetic") == 1);
        const auto cfg = apply_config(parse_config_text(
            "seed = 9\nworkers = 3\n[snow]\nscale_array = [1, 2, 3, 4, 5]\ncoverage_quantile = 0.1\n"
            "[io]\nformat = \"jsonl\"\n[mix]\np_synthetic = 0.25\n"));
        CHECK(cfg.snow.seed == 9);
        CHECK(cfg.mix.seed == 9);
        CHECK(cfg.workers == 3);
        CHECK(cfg.snow.scale_array[4] == 5.0);
        CHECK(cfg.snow.coverage_quantile == 0.1);
        CHECK(cfg.io.format == AnnotationFormat::Jsonl);
        CHECK(cfg.mix.p_synthetic == 0.25);
    }
    SUBCASE("defaults") {
        const auto cfg = apply_config({});
        CHECK(cfg.snow.working_width == 640);
        CHECK(cfg.snow.working_height == 360);
        CHECK(cfg.snow.coverage_quantile == 0.04);
        CHECK(cfg.mix.p_synthetic == 0.5);
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_config(parse_config_text("bogus = 1\n")), ConfigError);
        CHECK_THROWS_AS(apply_config(parse_config_text("[snow]\ncoverage_quantile = 1.5\n")), ConfigError);
        CHECK_THROWS_AS(apply_config(parse_config_text("[snow]\nscale_array = [1, 2]\n")), ConfigError);
        CHECK_THROWS_AS(apply_config(parse_config_text("[mix]\np_synthetic = -0.1\n")), ConfigError);
        CHECK_THROWS_AS(parse_config_text("seed = 1\nseed = 2\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("seed = \n"), ConfigError);
    }
}

TEST_CASE("generate") {
    test::TempDir dir;
    test::write_fixture_dataset(dir / "in", 3);
    const auto cfg = small_config(dir.path());
    const auto r = run({"--config", cfg, "--seed", "5", "generate", (dir / "in").string(), (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("0 original, 3 synthetic, 0 failed") != std::string::npos);
    CHECK(count_files(dir / "out/images", ".png") == 3);
    CHECK(count_files(dir / "out/labels", ".txt") == 3);
    const auto manifest = read_json(dir / "out/manifest.json");
    REQUIRE(manifest["items"].size() == 3);
    for (const auto& item : manifest["items"]) CHECK(item["branch"] == "synthetic");
    CHECK(manifest["master_seed"] == 5);

    SUBCASE("unreadable input") {
        const auto missing = (dir / "nope").string();
        const auto bad = run({"generate", missing, (dir / "out2").string()});
        CHECK(bad.code == 2);
        CHECK(bad.err.find(missing) != std::string::npos);
    }
}

TEST_CASE("mix extremes and determinism") {
    test::TempDir dir;
    test::write_fixture_dataset(dir / "in", 3);
    const auto cfg = small_config(dir.path());
    const auto in = (dir / "in").string();

    const auto r0 = run({"--config", cfg, "mix", in, (dir / "p0").string(), "--p-synthetic", "0"});
    REQUIRE(r0.code == 0);
    CHECK(r0.out.find("3 original, 0 synthetic") != std::string::npos);
    for (const auto& e : fs::directory_iterator(dir / "in/images")) {
        CHECK(test::read_text(e.path()) == test::read_text(dir / "p0/images" / e.path().filename()));
    }

    const auto r1 = run({"--config", cfg, "mix", in, (dir / "p1").string(), "--p-synthetic", "1"});
    REQUIRE(r1.code == 0);
    CHECK(r1.out.find("0 original, 3 synthetic") != std::string::npos);

    const auto a = run({"--config", cfg, "--seed", "11", "mix", in, (dir / "a").string()});
    const auto b = run({"--config", cfg, "--seed", "11", "--workers", "3", "mix", in, (dir / "b").string()});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(test::read_text(dir / "a/manifest.json") == test::read_text(dir / "b/manifest.json"));
    for (const auto& e : fs::directory_iterator(dir / "a/images")) {
        CHECK(test::read_text(e.path()) == test::read_text(dir / "b/images" / e.path().filename()));
    }
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--workers", "0", "inspect", "."}).code == 2);
    test::TempDir dir;
    test::write_text(dir / "bad.toml", "nonsense = 1\n");
    const auto r = run({"--config", (dir / "bad.toml").string(), "mix", "a", "b"});
    CHECK(r.code == 2);
    CHECK(r.err.find("nonsense") != std::string::npos);
}

TEST_CASE("eval") {
    test::TempDir dir;
    const auto gt = dir / "gt";
    std::filesystem::create_directories(gt / "images");
    // Three 100x100 images with integer boxes so the exact oracle applies.
    const std::vector<std::vector<oracle::IBox>> gts{
        {{10, 10, 40, 40, 0}, {50, 50, 90, 80, 0}},
        {{0, 0, 20, 20, 0}},
        {},
    };
    const std::vector<std::vector<oracle::IBox>> preds{
        {{12, 10, 40, 42, 0}, {50, 55, 90, 80, 0}, {60, 0, 70, 10, 0}},
        {},
        {{5, 5, 15, 15, 0}},
    };
    for (std::size_t i = 0; i < gts.size(); ++i) {
        const std::string stem = "im" + std::to_string(i);
        write_png(gt / "images" / (stem + ".png"), test::make_test_image(100, 100, 3));
        std::vector<BoundingBox> boxes;
        for (const auto& b : gts[i]) {
            boxes.push_back({double(b.x0), double(b.y0), double(b.x1), double(b.y1), 0});
        }
        test::write_text(gt / "labels" / (stem + ".txt"), format_yolo_labels(boxes, 100, 100));
        std::string lines;
        for (const auto& b : preds[i]) {
            lines += "0 0.9 " + std::to_string(b.x0) + " " + std::to_string(b.y0) + " " + std::to_string(b.x1) + " " +
                     std::to_string(b.y1) + "\n";
        }
        if (!lines.empty()) test::write_text(dir / "pred" / (stem + ".txt"), lines);
    }
    fs::create_directories(dir / "pred");

    const auto r = run({"eval", gt.string(), (dir / "pred").string()});
    REQUIRE(r.code == 0);
    for (const char* row : {"Average IOU", "mAP@50-95", "mAP@50", "Precision", "F1 Score"}) {
        CHECK(r.out.find(row) != std::string::npos);
    }
    const auto report = read_json(dir / "pred/report.json");
    double iou_sum = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gts.size(); ++i) {
        const auto s = oracle::score_image(gts[i], preds[i], {1, 2});
        iou_sum += s.iou;
        tp += s.tp;
        fp += s.fp;
        fn += s.fn;
    }
    CHECK(report["avg_iou"].get<double>() == doctest::Approx(iou_sum / 3.0).epsilon(1e-6));
    const double p = double(tp) / double(tp + fp), rc = double(tp) / double(tp + fn);
    CHECK(report["precision"].get<double>() == doctest::Approx(p).epsilon(1e-12));
    CHECK(report["recall"].get<double>() == doctest::Approx(rc).epsilon(1e-12));
    CHECK(report["f1"].get<double>() == doctest::Approx(2 * p * rc / (p + rc)).epsilon(1e-12));

    SUBCASE("perfect predictions") {
        for (std::size_t i = 0; i < gts.size(); ++i) {
            std::string lines;
            for (const auto& b : gts[i]) {
                lines += "0 1 " + std::to_string(b.x0) + " " + std::to_string(b.y0) + " " + std::to_string(b.x1) +
                         " " + std::to_string(b.y1) + "\n";
            }
            test::write_text(dir / "perfect" / ("im" + std::to_string(i) + ".txt"), lines);
        }
        const auto rp = run({"eval", gt.string(), (dir / "perfect").string(), "--report", (dir / "r.json").string()});
        REQUIRE(rp.code == 0);
        const auto j = read_json(dir / "r.json");
        for (const char* key : {"avg_iou", "map50_95", "map50", "precision", "f1"}) {
            CHECK(j[key].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("empty prediction directory") {
        fs::create_directories(dir / "empty");
        REQUIRE(run({"eval", gt.string(), (dir / "empty").string()}).code == 0);
        const auto j = read_json(dir / "empty/report.json");
        CHECK(j["precision"] == 0.0);
        CHECK(j["recall"] == 0.0);
        CHECK(j["map50"] == 0.0);
    }
    SUBCASE("bad threshold") { CHECK(run({"eval", gt.string(), (dir / "pred").string(), "--threshold", "1.5"}).code == 2); }
}

TEST_CASE("import-bosch") {
    test::TempDir dir;
    write_png(dir / "src/a.png", test::make_test_image(200, 100, 1));
    write_png(dir / "src/b.png", test::make_test_image(200, 100, 2));
    test::write_text(dir / "src/index.yaml",
                     "- path: ./a.png\n"
                     "  boxes:\n"
                     "  - {label: Green, occluded: false, x_min: 20, x_max: 60, y_min: 10, y_max: 50}\n"
                     "  - {label: Red, occluded: true, x_min: 80, x_max: 70, y_min: 10, y_max: 20}\n"
                     "- path: ./b.png\n"
                     "  boxes: []\n"
                     "- path: ./missing.png\n"
                     "  boxes:\n"
                     "  - {label: Yellow, occluded: false, x_min: 0, x_max: 640, y_min: 0, y_max: 360}\n");
    const auto r = run({"import-bosch", (dir / "src/index.yaml").string(), (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("max < min") != std::string::npos);
    CHECK(r.err.find("missing.png") != std::string::npos);
    CHECK(test::read_text(dir / "out/labels/a.txt") == "0 0.200000 0.300000 0.200000 0.400000\n");
    CHECK(test::read_text(dir / "out/labels/b.txt").empty());
    CHECK(test::read_text(dir / "out/labels/missing.txt") == "0 0.250000 0.250000 0.500000 0.500000\n");
    CHECK(fs::exists(dir / "out/images/a.png"));

    SUBCASE("subset list") {
        test::write_text(dir / "keep.txt", "# wanted\nb.png\n./a.png\nghost.png\n");
        const auto rs = run({"import-bosch", (dir / "src/index.yaml").string(), (dir / "sub").string(), "--subset",
                             (dir / "keep.txt").string()});
        REQUIRE(rs.code == 0);
        CHECK(rs.out.find("imported 2 images") != std::string::npos);
        CHECK(rs.out.find("1 not in subset") != std::string::npos);
        CHECK(rs.err.find("ghost.png") != std::string::npos);
        CHECK(fs::exists(dir / "sub/labels/a.txt"));
        CHECK_FALSE(fs::exists(dir / "sub/labels/missing.txt"));
    }

    test::write_text(dir / "bad.yaml", "- path: [unclosed\n");
    CHECK(run({"import-bosch", (dir / "bad.yaml").string(), (dir / "o2").string()}).code == 2);
}

TEST_CASE("inspect") {
    test::TempDir dir;
    test::write_fixture_dataset(dir / "ds", 2);
    const auto r = run({"inspect", (dir / "ds").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("images: 2") != std::string::npos);
    CHECK(r.out.find("boxes: 4") != std::string::npos);
    CHECK(r.out.find("resolution 64x36: 2") != std::string::npos);
    CHECK(run({"inspect", (dir / "none").string()}).code == 2);
}
