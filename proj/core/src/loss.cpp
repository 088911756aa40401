// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/model/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "conformer_forge/ad/ops.hpp"
#include "conformer_forge/geom.hpp"

namespace conformer_forge::model {

double huber(double d, double delta) {
  const double a = std::abs(d);
  return a <= delta ? 0.5 * d * d : delta * a - 0.5 * delta * delta;
}

double frame_loss(std::span<const Vec3> pred, std::span<const Vec3> target,
                  const LossConfig& config) {
  if (pred.size() != target.size()) {
    throw std::invalid_argument("loss: " + std::to_string(pred.size()) + " predicted atoms vs " +
                                std::to_string(target.size()) + " target atoms");
  }
  double fit = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (int c = 0; c < 3; ++c) fit += huber(pred[i][c] - target[i][c], config.delta);
  }
  double bonds = 0.0;
  if (pred.size() > 1) {
    for (std::size_t i = 0; i + 1 < pred.size(); ++i) {
      const double d = (pred[i + 1] - pred[i]).norm() - (target[i + 1] - target[i]).norm();
      bonds += d * d;
    }
    bonds /= static_cast<double>(pred.size() - 1);
  }
  return fit + config.bond_weight * bonds;
}

ad::Var batch_loss(ad::Var pred, const ad::Tensor& target, std::size_t frames,
                   const LossConfig& config) {
  if (pred.value().size() != target.size() || pred.cols() != 3) {
    throw std::invalid_argument("loss: prediction " + pred.value().shape_string() +
                                " does not match target " + target.shape_string());
  }
  if (frames == 0 || pred.rows() % frames != 0) {
    throw std::invalid_argument("loss: rows are not a whole number of frames");
  }
  const std::size_t n = pred.rows() / frames;
  ad::Tape& tape = pred.tape();
  const double inv_frames = 1.0 / static_cast<double>(frames);
  ad::Var fit = ad::sum(ad::huber(ad::sub(pred, tape.constant(target)), config.delta));
  ad::Var total = ad::scale(fit, inv_frames);
  if (n < 2 || config.bond_weight == 0.0) return total;

  std::vector<std::size_t> head;
  std::vector<std::size_t> tail;
  ad::Tensor true_len = ad::Tensor::matrix(frames * (n - 1), 1);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t r = f * n + i;
      head.push_back(r + 1);
      tail.push_back(r);
      double ss = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        const double d = target[3 * (r + 1) + c] - target[3 * r + c];
        ss += d * d;
      }
      true_len[f * (n - 1) + i] = std::sqrt(ss);
    }
  }
  ad::Var bond = ad::sub(ad::gather_rows(pred, std::move(head)), ad::gather_rows(pred, std::move(tail)));
  ad::Var dev = ad::sub(ad::row_norm(bond), tape.constant(std::move(true_len)));
  ad::Var penalty = ad::scale(ad::sum(ad::square(dev)),
                              config.bond_weight * inv_frames / static_cast<double>(n - 1));
  return ad::add(total, penalty);
}

ad::Tensor stack_coords(std::span<const Coords* const> frames) {
  std::size_t rows = 0;
  for (const Coords* f : frames) rows += f->size();
  ad::Tensor out = ad::Tensor::matrix(rows, 3);
  std::size_t r = 0;
  for (const Coords* f : frames) {
    for (const Vec3& p : *f) {
      for (int c = 0; c < 3; ++c) out[3 * r + c] = p[c];
      ++r;
    }
  }
  return out;
}

Reconstruction score_prediction(Coords predicted, std::span<const Vec3> frame,
                                const LossConfig& config) {
  if (predicted.size() != frame.size()) {
    throw std::invalid_argument("reconstruct: prediction has " + std::to_string(predicted.size()) +
                                " atoms, frame has " + std::to_string(frame.size()));
  }
  Reconstruction r;
  r.predicted = std::move(predicted);
  r.target = geom::center(frame);
  r.atom_error.resize(frame.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    r.atom_error[i] = (r.predicted[i] - r.target[i]).norm();
    sum += r.atom_error[i];
  }
  r.mean_error = sum / static_cast<double>(frame.size());
  r.rmsd = geom::kabsch_rmsd(r.predicted, r.target).rmsd;
  r.loss = frame_loss(r.predicted, r.target, config);
  return r;
}

Reconstruction reconstruct(ProGAE& model, std::span<const Vec3> frame, const LossConfig& config) {
  if (frame.size() != model.atom_count()) {
    throw std::invalid_argument("reconstruct: frame has " + std::to_string(frame.size()) +
                                " atoms, model expects " + std::to_string(model.atom_count()));
  }
  const std::vector<double> z = model.encode_frame(frame).concat();
  return score_prediction(model.decode_latent(z), frame, config);
}

}  // namespace conformer_forge::model
