#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qdual/config.hpp"
#include "qdual/errors.hpp"
#include "qdual/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Dyson and dual-Dyson series experiments for driven two-level systems"};
    std::string config_path;
    std::string out_dir;
    bool seedless = false;
    app.add_option("config", config_path, "path to the JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config's 'out')");
    app.add_flag("--seedless", seedless,
                 "accepted for compatibility; runs are always deterministic");
    CLI11_PARSE(app, argc, argv);

    std::string text;
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config file '" << config_path << "'\n";
            return 4;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad()) {
            std::cerr << "error: cannot read config file '" << config_path << "'\n";
            return 4;
        }
        text = buf.str();
    }

    try {
        qdual::RunConfig config = qdual::parse_config(text);
        if (!out_dir.empty()) config.out = out_dir;
        qdual::run(config);
    } catch (const qdual::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qdual::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qdual::UnknownKey& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qdual::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const qdual::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
