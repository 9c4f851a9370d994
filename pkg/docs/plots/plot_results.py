# *****************************************************************************
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
#
# ******************************************************************************
"""Plots of squeezeclock result files.

    python docs/plots/plot_results.py out/run/allan.csv allan.png

The plot kind follows the file name: ``allan.csv``, ``sweep.csv``,
``psd.csv`` or ``moments.csv``.
"""

import argparse
import os
from collections import defaultdict

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402

from squeezeclock.infrastructure.writers import read_rows  # noqa: E402


def _column(rows, name):
    return [float(row[name]) for row in rows]


def plot_allan(rows, ax):
    taus = _column(rows, 'tau')
    ax.errorbar(taus, _column(rows, 'sigma_y'), yerr=_column(rows, 'stderr'),
                fmt='o', label='closed loop')
    ax.loglog(taus, _column(rows, 'classical_sigma_y'), '--',
              label='overlapping Allan')
    ax.set_xlabel(r'$\tau$')
    ax.set_ylabel(r'$\sigma_y(\tau)$')


def plot_sweep(rows, ax):
    series = defaultdict(list)
    for row in rows:
        series[(row['feedback'], row['state'])].append(row)

    for (feedback, state), points in sorted(series.items()):
        x = _column(points, 'axis_value')
        line, = ax.loglog(x, _column(points, 'floor_coeff'), 'o',
                          label='{} / {}'.format(feedback, state))
        ax.loglog(x, _column(points, 'theory_floor'), '-',
                  color=line.get_color())
    ax.set_xlabel('sweep value')
    ax.set_ylabel(r'$\sigma_y\sqrt{\tau}$')


def plot_psd(rows, ax):
    f = _column(rows, 'f')
    for name in ('S_free', 'S_locked_unsqueezed', 'S_locked_squeezed'):
        ax.loglog(f, _column(rows, name), label=name)
    ax.set_xlabel('f')
    ax.set_ylabel(r'$S_\omega(f)$')


def plot_moments(rows, ax):
    ax.semilogx(_column(rows, 'kappa'), _column(rows, 'xi'), 'o-')
    ax.set_xlabel(r'$\kappa$')
    ax.set_ylabel(r'$\xi$')


PLOTS = {
    'allan.csv': plot_allan,
    'sweep.csv': plot_sweep,
    'psd.csv': plot_psd,
    'moments.csv': plot_moments,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.split('\n')[0])
    parser.add_argument('result', help='result CSV file')
    parser.add_argument('image', help='output image')
    args = parser.parse_args()

    plot = PLOTS.get(os.path.basename(args.result))
    if plot is None:
        parser.error('no plot for {}'.format(args.result))

    fig, ax = plt.subplots(figsize=(6, 4))
    plot(read_rows(args.result), ax)
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.image)
    plt.close(fig)


if __name__ == '__main__':
    main()
