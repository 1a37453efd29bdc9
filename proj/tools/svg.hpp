#pragma once

// Minimal SVG emitter for mesa contours and feature-plane plots: axes, polyline
// paths, scatter markers. CSV is the canonical output; these renders are a
// convenience with no plotting dependencies.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace cfarfp::svg {

struct Frame {
    double x_min, x_max, y_min, y_max;
    int width = 640, height = 480;
    int margin = 56;

    double px(double x) const {
        return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
    }
    double py(double y) const {
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
    }
};

class Canvas {
public:
    Canvas(Frame frame, std::string x_label, std::string y_label) : frame_(frame) {
        append("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        appendf("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                frame_.width, frame_.height, frame_.width, frame_.height);
        append("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        axes(x_label, y_label);
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double stroke_width = 1.5,
                  bool dashed = false) {
        if (pts.size() < 2) return;
        std::string d;
        char buf[64];
        for (size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%c%.2f %.2f", i == 0 ? 'M' : 'L',
                          frame_.px(pts[i].first), frame_.py(pts[i].second));
            d += buf;
        }
        appendf("<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.2f\"%s/>\n",
                d.c_str(), color.c_str(), stroke_width,
                dashed ? " stroke-dasharray=\"6 4\"" : "");
    }

    void scatter(const std::vector<std::pair<double, double>>& pts,
                 const std::string& color, double radius = 1.6) {
        append("<g fill=\"" + color + "\" fill-opacity=\"0.6\">\n");
        for (auto& [x, y] : pts) {
            if (x < frame_.x_min || x > frame_.x_max || y < frame_.y_min || y > frame_.y_max)
                continue;
            appendf("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\"/>\n", frame_.px(x),
                    frame_.py(y), radius);
        }
        append("</g>\n");
    }

    void legend_entry(const std::string& text, const std::string& color, int slot) {
        const double x = frame_.margin + 10;
        const double y = frame_.margin - 38 + 14 * slot;
        appendf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                "stroke-width=\"2\"/>\n",
                x, y - 4, x + 18, y - 4, color.c_str());
        appendf("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\">"
                "%s</text>\n",
                x + 24, y, text.c_str());
    }

    std::string finish() {
        append("</svg>\n");
        return std::move(out_);
    }

private:
    void axes(const std::string& x_label, const std::string& y_label) {
        const Frame& f = frame_;
        appendf("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                f.margin, f.height - f.margin, f.width - f.margin, f.height - f.margin);
        appendf("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                f.margin, f.height - f.margin, f.margin, f.margin);
        for (int t = 0; t <= 4; ++t) {
            const double xv = f.x_min + (f.x_max - f.x_min) * t / 4.0;
            const double yv = f.y_min + (f.y_max - f.y_min) * t / 4.0;
            appendf("<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"black\"/>\n",
                    f.px(xv), f.height - f.margin, f.px(xv), f.height - f.margin + 5);
            appendf("<text x=\"%.1f\" y=\"%d\" font-size=\"10\" text-anchor=\"middle\" "
                    "font-family=\"sans-serif\">%.3g</text>\n",
                    f.px(xv), f.height - f.margin + 18, xv);
            appendf("<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"black\"/>\n",
                    f.margin - 5, f.py(yv), f.margin, f.py(yv));
            appendf("<text x=\"%d\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\" "
                    "font-family=\"sans-serif\">%.3g</text>\n",
                    f.margin - 8, f.py(yv) + 3, yv);
        }
        appendf("<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\" "
                "font-family=\"sans-serif\">%s</text>\n",
                f.width / 2, f.height - 12, x_label.c_str());
        appendf("<text x=\"14\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\" "
                "font-family=\"sans-serif\" transform=\"rotate(-90 14 %d)\">%s</text>\n",
                f.height / 2, f.height / 2, y_label.c_str());
    }

    void append(const std::string& s) { out_ += s; }
    template <class... Args>
    void appendf(const char* fmt, Args... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        out_ += buf;
    }

    Frame frame_;
    std::string out_;
};

}  // namespace cfarfp::svg
