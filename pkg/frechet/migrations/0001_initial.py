import django.core.validators
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SweepRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('s', models.PositiveIntegerField(validators=[django.core.validators.MinValueValidator(1)])),
                ('t', models.PositiveIntegerField(validators=[django.core.validators.MinValueValidator(1)])),
                ('p', models.CharField(help_text="Canonical 'num/den' value of s/t", max_length=32)),
                ('d', models.PositiveSmallIntegerField(default=4)),
                ('vertex_count', models.PositiveIntegerField(validators=[django.core.validators.MinValueValidator(1)])),
                ('elapsed_ms', models.PositiveIntegerField(default=0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'ordering': ['d', 't', 's'],
            },
        ),
        migrations.AddConstraint(
            model_name='sweeprecord',
            constraint=models.UniqueConstraint(fields=('d', 's', 't'), name='unique_sweep_point'),
        ),
    ]
