#include "rxval/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rxval/csv.hpp"

namespace rxval {

namespace {

constexpr double kInterceptClamp = 15.0;
constexpr double kGradientTolerance = 1e-8;
constexpr int kMaxNewtonIterations = 10000;

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    if (z > 0.0) {
        return z + std::log1p(std::exp(-z));
    }
    return std::log1p(std::exp(z));
}

double label_mean(const std::vector<int>& labels) {
    long long sum = 0;
    for (int y : labels) {
        sum += y;
    }
    return static_cast<double>(sum) / static_cast<double>(labels.size());
}

// In-place Cholesky solve of the symmetric positive definite system
// a * x = b (dimension dim, row-major). Returns false if not PD.
bool cholesky_solve(std::vector<double> a, std::size_t dim, std::vector<double>& b) {
    for (std::size_t j = 0; j < dim; ++j) {
        double diag = a[j * dim + j];
        for (std::size_t k = 0; k < j; ++k) {
            diag -= a[j * dim + k] * a[j * dim + k];
        }
        if (diag <= 0.0 || !std::isfinite(diag)) {
            return false;
        }
        const double root = std::sqrt(diag);
        a[j * dim + j] = root;
        for (std::size_t i = j + 1; i < dim; ++i) {
            double v = a[i * dim + j];
            for (std::size_t k = 0; k < j; ++k) {
                v -= a[i * dim + k] * a[j * dim + k];
            }
            a[i * dim + j] = v / root;
        }
    }
    // Forward then back substitution.
    for (std::size_t i = 0; i < dim; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            v -= a[i * dim + k] * b[k];
        }
        b[i] = v / a[i * dim + i];
    }
    for (std::size_t ii = dim; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < dim; ++k) {
            v -= a[k * dim + ii] * b[k];
        }
        b[ii] = v / a[ii * dim + ii];
    }
    return true;
}

void fit_logistic(FittedModel& model, const LabeledDataset& train) {
    const std::size_t m = train.size();
    const std::size_t d = train.features.cols;
    if (model.spec.lambda < 0.0) {
        throw Error(ErrorKind::Config, "lambda must be >= 0");
    }
    // Objective: (1/m) sum_i logloss_i + (lambda/2) ||w||^2, intercept
    // unpenalized. Same form as ridge-style glmnet; sklearn's C maps to
    // lambda = 1/(C*m).
    const double lambda = model.spec.lambda;

    long long positives = 0;
    for (int y : train.labels) {
        positives += y;
    }
    model.weights.assign(d, 0.0);
    if (positives == 0 || positives == static_cast<long long>(m)) {
        // Degenerate fold: the unpenalized intercept diverges; clamp it.
        model.intercept = (positives == 0) ? -kInterceptClamp : kInterceptClamp;
        return;
    }

    const double mean = static_cast<double>(positives) / static_cast<double>(m);
    const std::size_t dim = d + 1;  // weights then intercept
    std::vector<double> theta(dim, 0.0);
    theta[d] = std::log(mean / (1.0 - mean));

    std::vector<double> z(m);
    std::vector<double> prob(m);
    std::vector<double> grad(dim);
    std::vector<double> hessian(dim * dim);
    std::vector<double> step(dim);
    std::vector<double> trial(dim);

    auto linear = [&](const std::vector<double>& params, std::size_t row) {
        double v = params[d];
        const double* x = train.features.values.data() + row * d;
        for (std::size_t c = 0; c < d; ++c) {
            v += params[c] * x[c];
        }
        return v;
    };
    auto loss_at = [&](const std::vector<double>& params) {
        double data = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double zi = linear(params, i);
            data += softplus(zi) - train.labels[i] * zi;
        }
        data /= static_cast<double>(m);
        double reg = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            reg += params[c] * params[c];
        }
        return data + 0.5 * lambda * reg;
    };

    double loss = loss_at(theta);
    for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
        for (std::size_t i = 0; i < m; ++i) {
            z[i] = linear(theta, i);
            prob[i] = sigmoid(z[i]);
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double r = prob[i] - train.labels[i];
            const double* x = train.features.values.data() + i * d;
            for (std::size_t c = 0; c < d; ++c) {
                grad[c] += r * x[c];
            }
            grad[d] += r;
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t c = 0; c < dim; ++c) {
            grad[c] *= inv_m;
        }
        for (std::size_t c = 0; c < d; ++c) {
            grad[c] += lambda * theta[c];
        }

        double grad_norm = 0.0;
        for (double g : grad) {
            grad_norm += g * g;
        }
        grad_norm = std::sqrt(grad_norm);
        if (grad_norm <= kGradientTolerance) {
            std::copy(theta.begin(), theta.begin() + d, model.weights.begin());
            model.intercept = theta[d];
            return;
        }

        std::fill(hessian.begin(), hessian.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double s = prob[i] * (1.0 - prob[i]);
            const double* x = train.features.values.data() + i * d;
            for (std::size_t r = 0; r < d; ++r) {
                const double sr = s * x[r];
                double* hrow = hessian.data() + r * dim;
                for (std::size_t c = r; c < d; ++c) {
                    hrow[c] += sr * x[c];
                }
                hrow[d] += sr;
            }
            hessian[d * dim + d] += s;
        }
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < r; ++c) {
                hessian[r * dim + c] = hessian[c * dim + r];
            }
        }
        for (std::size_t c = 0; c < dim * dim; ++c) {
            hessian[c] *= inv_m;
        }
        for (std::size_t c = 0; c < d; ++c) {
            hessian[c * dim + c] += lambda;
        }

        step = grad;
        double jitter = 0.0;
        while (!cholesky_solve(hessian, dim, step)) {
            jitter = (jitter == 0.0) ? 1e-10 : jitter * 10.0;
            for (std::size_t c = 0; c < dim; ++c) {
                hessian[c * dim + c] += jitter;
            }
            step = grad;
            if (jitter > 1e6) {
                throw Error(ErrorKind::NonConvergence, "hessian could not be factorized");
            }
        }

        double directional = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            directional += grad[c] * step[c];
        }
        double scale = 1.0;
        bool moved = false;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t c = 0; c < dim; ++c) {
                trial[c] = theta[c] - scale * step[c];
            }
            const double trial_loss = loss_at(trial);
            if (trial_loss <= loss - 1e-4 * scale * directional || trial_loss < loss) {
                theta = trial;
                loss = trial_loss;
                moved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!moved) {
            // No descent at machine precision; accept current point if the
            // gradient is merely slightly above tolerance.
            if (grad_norm <= 1e-6) {
                break;
            }
            throw Error(ErrorKind::NonConvergence,
                        "line search stalled with gradient norm " + format_double(grad_norm));
        }
    }

    // Iteration cap: accept only a solution that satisfies the tolerance.
    double final_norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        z[i] = linear(theta, i);
        prob[i] = sigmoid(z[i]);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = prob[i] - train.labels[i];
        const double* x = train.features.values.data() + i * d;
        for (std::size_t c = 0; c < d; ++c) {
            grad[c] += r * x[c];
        }
        grad[d] += r;
    }
    for (std::size_t c = 0; c < dim; ++c) {
        grad[c] /= static_cast<double>(m);
    }
    for (std::size_t c = 0; c < d; ++c) {
        grad[c] += lambda * theta[c];
    }
    for (double g : grad) {
        final_norm += g * g;
    }
    final_norm = std::sqrt(final_norm);
    if (final_norm > 1e-6) {
        throw Error(ErrorKind::NonConvergence,
                    "gradient norm " + format_double(final_norm) + " after iteration cap");
    }
    std::copy(theta.begin(), theta.begin() + d, model.weights.begin());
    model.intercept = theta[d];
}

std::vector<double> knn_scores(const FittedModel& model, const Matrix& test_features) {
    const std::size_t m = model.train_features.rows;
    const std::size_t d = model.train_features.cols;
    const std::size_t k = std::min<std::size_t>(model.spec.k, m);

    std::vector<std::pair<double, std::size_t>> distances(m);
    std::vector<double> out(test_features.rows, 0.0);
    for (std::size_t r = 0; r < test_features.rows; ++r) {
        const double* q = test_features.values.data() + r * d;
        for (std::size_t i = 0; i < m; ++i) {
            const double* x = model.train_features.values.data() + i * d;
            double dist = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = q[c] - x[c];
                dist += diff * diff;
            }
            distances[i] = {dist, i};
        }
        // (distance, index) ordering = deterministic tie break by index.
        std::nth_element(distances.begin(), distances.begin() + (k - 1), distances.end());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            hits += static_cast<std::size_t>(model.train_labels[distances[i].second]);
        }
        out[r] = static_cast<double>(hits) / static_cast<double>(k);
    }
    return out;
}

}  // namespace

PredictorSpec PredictorSpec::parse(const std::string& text) {
    PredictorSpec spec;
    std::string body = text;
    const std::string zscore_suffix = "+zscore";
    if (body.size() >= zscore_suffix.size() &&
        body.compare(body.size() - zscore_suffix.size(), zscore_suffix.size(),
                     zscore_suffix) == 0) {
        spec.posthoc_zscore = true;
        body.resize(body.size() - zscore_suffix.size());
    }
    std::string head = body;
    std::string params;
    const std::size_t colon = body.find(':');
    if (colon != std::string::npos) {
        head = body.substr(0, colon);
        params = body.substr(colon + 1);
    }

    if (head == "negmean") {
        spec.kind = ModelKind::NegativeMean;
    } else if (head == "mean") {
        spec.kind = ModelKind::Mean;
    } else if (head == "logistic") {
        spec.kind = ModelKind::Logistic;
    } else if (head == "knn") {
        spec.kind = ModelKind::Knn;
    } else {
        throw Error(ErrorKind::Config, "unknown model '" + text + "'");
    }

    if (!params.empty()) {
        const std::size_t eq = params.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, "model parameter must be key=value in '" + text + "'");
        }
        const std::string key = params.substr(0, eq);
        const std::string value = params.substr(eq + 1);
        if (spec.kind == ModelKind::Logistic && key == "lambda") {
            spec.lambda = parse_double(value, "model '" + text + "'");
            if (spec.lambda < 0.0) {
                throw Error(ErrorKind::Config, "lambda must be >= 0");
            }
        } else if (spec.kind == ModelKind::Knn && key == "k") {
            const long long k = parse_int(value, "model '" + text + "'");
            if (k < 1) {
                throw Error(ErrorKind::Config, "k must be >= 1");
            }
            spec.k = static_cast<std::size_t>(k);
        } else {
            throw Error(ErrorKind::Config, "unknown parameter '" + key + "' in '" + text + "'");
        }
    }
    return spec;
}

std::string PredictorSpec::to_string() const {
    std::string out;
    switch (kind) {
        case ModelKind::NegativeMean: out = "negmean"; break;
        case ModelKind::Mean: out = "mean"; break;
        case ModelKind::Logistic: out = "logistic:lambda=" + format_double(lambda); break;
        case ModelKind::Knn: out = "knn:k=" + std::to_string(k); break;
    }
    if (posthoc_zscore) {
        out += "+zscore";
    }
    return out;
}

std::string PredictorSpec::family() const {
    std::string out;
    switch (kind) {
        case ModelKind::NegativeMean: out = "negmean"; break;
        case ModelKind::Mean: out = "mean"; break;
        case ModelKind::Logistic: out = "logistic"; break;
        case ModelKind::Knn: out = "knn:k=" + std::to_string(k); break;
    }
    if (posthoc_zscore) {
        out += "+zscore";
    }
    return out;
}

FittedModel fit(const PredictorSpec& spec, const LabeledDataset& train) {
    if (train.size() == 0) {
        throw Error(ErrorKind::EmptyTrainingSet, "cannot fit on an empty training set");
    }
    FittedModel model;
    model.spec = spec;
    switch (spec.kind) {
        case ModelKind::NegativeMean:
        case ModelKind::Mean:
            model.train_mean = label_mean(train.labels);
            break;
        case ModelKind::Logistic:
            fit_logistic(model, train);
            break;
        case ModelKind::Knn:
            if (spec.k < 1) {
                throw Error(ErrorKind::Config, "k must be >= 1");
            }
            model.train_features = train.features;
            model.train_labels = train.labels;
            break;
    }
    return model;
}

std::vector<double> predict(const FittedModel& model, const Matrix& test_features) {
    switch (model.spec.kind) {
        case ModelKind::NegativeMean:
            return std::vector<double>(test_features.rows, -model.train_mean);
        case ModelKind::Mean:
            return std::vector<double>(test_features.rows, model.train_mean);
        case ModelKind::Logistic: {
            if (test_features.cols != model.weights.size()) {
                throw Error(ErrorKind::DimensionMismatch,
                            "test has " + std::to_string(test_features.cols) +
                                " features, model expects " + std::to_string(model.weights.size()));
            }
            std::vector<double> out(test_features.rows);
            for (std::size_t r = 0; r < test_features.rows; ++r) {
                double z = model.intercept;
                const double* x = test_features.values.data() + r * test_features.cols;
                for (std::size_t c = 0; c < test_features.cols; ++c) {
                    z += model.weights[c] * x[c];
                }
                out[r] = sigmoid(z);
            }
            return out;
        }
        case ModelKind::Knn:
            if (test_features.cols != model.train_features.cols) {
                throw Error(ErrorKind::DimensionMismatch,
                            "test has " + std::to_string(test_features.cols) +
                                " features, model expects " +
                                std::to_string(model.train_features.cols));
            }
            return knn_scores(model, test_features);
    }
    throw Error(ErrorKind::Config, "unknown model kind");
}

std::vector<double> posthoc_standardize(const FittedModel& model,
                                        const LabeledDataset& train,
                                        const Matrix& test_features) {
    const std::vector<double> train_scores = predict(model, train.features);
    double mu = 0.0;
    for (double s : train_scores) {
        mu += s;
    }
    mu /= static_cast<double>(train_scores.size());
    double var = 0.0;
    for (double s : train_scores) {
        var += (s - mu) * (s - mu);
    }
    var /= static_cast<double>(train_scores.size());
    const double sigma = std::sqrt(var);

    std::vector<double> out = predict(model, test_features);
    if (sigma < 1e-12) {
        std::fill(out.begin(), out.end(), 0.0);
        return out;
    }
    for (double& s : out) {
        s = (s - mu) / sigma;
    }
    return out;
}

}  // namespace rxval
