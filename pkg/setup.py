from setuptools import setup
from circmark.constants import VERSION


if __name__ == '__main__':
    setup(
        name='circmark',
        packages=['circmark', 'circmark.controller'],
        version=VERSION,
        entry_points={
          'console_scripts': [
              'circmark = circmark.main:main'
          ]
        },
        include_package_data=True,
        zip_safe=False,
        data_files=[('resources/bench', ['resources/bench/block_grid.yml',
                                         'resources/bench/filtering_and_cropping.yml',
                                         'resources/bench/cropping_and_rotation.yml',
                                         'resources/bench/strong_attacks.yml'])],
        install_requires=['numpy', 'scipy', 'scikit-image', 'matplotlib', 'docopt', 'PyYAML', 'Pillow'],
        extras_require={'test': ['pytest']},
        description='Blind image watermarking with circulant blocks in the singular values',
        keywords=['watermarking', 'svd', 'circulant', 'image', 'copyright'],
        classifiers=['Development Status :: 3 - Alpha',
                     'Natural Language :: English',
                     'Intended Audience :: Science/Research',
                     'Operating System :: POSIX :: Linux',
                     'Programming Language :: Python :: 3',
                     'Topic :: Multimedia :: Graphics',
                     'Topic :: Security',
                     ]
    )
